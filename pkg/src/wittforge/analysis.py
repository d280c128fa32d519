"""Coefficient analysis: goodness lattices, type tags, bracket expansion,
multinomial valuations, and cyclotomic orders.

Goodness of a level-n coefficient means a representative exists inside
Z[p^{1/p^{n-1}}, T^{1/p^n}, S^{1/p^n}].  The computed normal form may carry
extra monomials that vanish modulo p^n in the ring of integers without
vanishing in the presented ring, so the verdict splits the coefficient into
its lattice-aligned part and a violating part and requires the violating
part to clear the exact window-order bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ConfigError, InsufficientDepthError
from .towers import CYCLOTOMIC, RingElement, TowerSpec
from .wittpoly import WittCache, witt_poly


def goodness_lattice(spec: TowerSpec, n: int) -> dict[str, int]:
    """Exponent divisors carving Z[p^{1/p^{n-1}}, T^{1/p^n}, S^{1/p^n}] out of
    the height-N presentation."""
    p, N = spec.p, spec.N
    if n > N:
        raise ConfigError(f"level {n} exceeds height {N}")
    if spec.scenario == CYCLOTOMIC:
        return {"x": p ** (N - n + 1)}
    return {"x": p ** (N - n + 1), "t": p ** (N - n), "s": p ** (N - n)}


@dataclass
class GoodnessReport:
    level: int
    verdict: bool
    coefficient: RingElement = field(repr=False)
    lattice: dict[str, int]
    witness: tuple | None = None
    aligned: RingElement | None = field(repr=False, default=None)
    note: str = ""

    def to_dict(self):
        out = {
            "level": self.level,
            "verdict": self.verdict,
            "lattice": {k: v for k, v in sorted(self.lattice.items())},
            "coefficient": self.coefficient.serialize().splitlines(),
            "witness": list(self.witness) if self.witness else None,
            "note": self.note,
        }
        out["lattice_form"] = (
            self.aligned.serialize().splitlines() if self.aligned is not None else None
        )
        return out


def goodness_check(c: RingElement, n: int) -> GoodnessReport:
    """Decide whether c has a lattice representative mod p^n.

    The aligned part keeps every monomial satisfying the divisibility
    constraints; the verdict is true when the violating remainder vanishes
    mod p^n in the ring of integers (exact window-order test).
    """
    spec = c.spec
    lattice = goodness_lattice(spec, n)
    gens = spec.gens("char0")
    idx = [(gens.index(name), d) for name, d in lattice.items()]
    aligned, violating = {}, {}
    for exps, coeff in c.coeffs.items():
        ok = all(exps[gi] % d == 0 for gi, d in idx if d)
        (aligned if ok else violating)[exps] = coeff
    if not violating:
        return GoodnessReport(n, True, c, lattice, aligned=c)
    v_elt = spec.element(violating, mod=c.mod)
    o = v_elt.window_min_order()
    if o is None or o >= n:
        rep = spec.element(aligned, mod=c.mod)
        return GoodnessReport(
            n, True, c, lattice, aligned=rep,
            note="violating monomials vanish mod p^n in the ring of integers",
        )
    witness = min(violating)
    return GoodnessReport(
        n, False, c, lattice, witness=witness,
        note=f"violating part has order {o} < {n}",
    )


@dataclass(frozen=True)
class TypeTag:
    m: int
    k: int
    N0: int

    def __post_init__(self):
        if self.m < 0 or self.k < 0 or self.N0 < 0:
            raise ConfigError("type tag components must be nonnegative")


@dataclass
class TypeCheckResult:
    tag: TypeTag
    results: dict[int, bool]
    insufficient_from: int

    @property
    def all_pass(self) -> bool:
        return all(self.results.values()) and bool(self.results)

    def summary(self) -> str:
        idx = sorted(self.results)
        rng = f"[{idx[0]}..{idx[-1]}]" if idx else "[]"
        status = "verified" if self.all_pass else "violated"
        return f"type {self.tag.m, self.tag.k, self.tag.N0} {status} for indices {rng}"


def type_lattice(spec: TowerSpec, level: int) -> dict[str, int]:
    """Constraints for R_level[p^{1/p^{level-1}}] at height N."""
    p, N = spec.p, spec.N
    lat = {"x": p ** (N - level + 1)}
    if spec.scenario != CYCLOTOMIC:
        lat["t"] = p ** (N - level)
        lat["s"] = p ** (N - level)
    return lat


def type_check(a, tag: TypeTag) -> TypeCheckResult:
    """Test a^{sharp_nu} * p^{m/p^nu} against R_{nu+k}[p^{1/p^{nu+k-1}}] mod p
    for every ledger-testable index nu >= N0.

    The pass is necessarily partial ("verified for indices [N0..J]"), never a
    proof for all indices.
    """
    spec = a.spec
    p, N = spec.p, spec.N
    results: dict[int, bool] = {}
    nu = tag.N0
    while nu + tag.k <= N:
        extra_x = tag.m * p ** (N - nu)
        try:
            val = a.sharp(nu, 1, extra_x=extra_x)
        except InsufficientDepthError:
            break
        lattice = type_lattice(spec, nu + tag.k)
        report = _lattice_mod_p(val, lattice)
        results[nu] = report
        nu += 1
    return TypeCheckResult(tag, results, insufficient_from=nu)


def _lattice_mod_p(val: RingElement, lattice: dict[str, int]) -> bool:
    """Lattice membership mod p, tolerating monomials of order >= 1."""
    spec = val.spec
    gens = spec.gens("char0")
    idx = [(gens.index(name), d) for name, d in lattice.items()]
    violating = {
        exps: c
        for exps, c in val.coeffs.items()
        if any(exps[gi] % d for gi, d in idx if d)
    }
    if not violating:
        return True
    o = spec.element(violating, mod=val.mod).window_min_order()
    return o is None or o >= 1


@dataclass
class BracketExpansion:
    """S_n(B_0..B_n; 0, C_1..C_n) as a formal polynomial.

    Keys are (B-exponents, C-exponents) tuples (C_0 slot removed); the
    weighted degree of every monomial must equal p^n.
    """

    p: int
    n: int
    terms: dict[tuple[tuple[int, ...], tuple[int, ...]], int]

    def weights(self) -> set[int]:
        out = set()
        for (bexp, cexp) in self.terms:
            w = sum(self.p ** j * e for j, e in enumerate(bexp))
            w += sum(self.p ** j * e for j, e in enumerate(cexp, start=1))
            out.add(w)
        return out

    def homogeneous(self) -> bool:
        return self.weights() <= {self.p ** self.n}

    def has_leading_C_term(self) -> bool:
        key = ((0,) * (self.n + 1), (0,) * (self.n - 1) + (1,))
        return self.terms.get(key) == 1


def expand_An_bracket(n: int, p: int, cache: WittCache | None = None) -> BracketExpansion:
    """Substitute X -> (B_0..B_n), Y -> (0, C_1..C_n) into the universal sum
    polynomial: the bracket expressing (p-flat)^{p^n} A_n."""
    entry = witt_poly(p, n, "sum", cache)
    terms: dict = {}
    for exps, c in entry.poly.coeffs.items():
        xs, ys = exps[: n + 1], exps[n + 1:]
        if ys[0]:
            continue  # Y_0 = 0 kills the monomial
        key = (xs, ys[1:])
        terms[key] = terms.get(key, 0) + c
    terms = {k: v for k, v in terms.items() if v}
    return BracketExpansion(p, n, terms)


def vp_factorial(a: int, p: int) -> int:
    total = 0
    q = p
    while q <= a:
        total += a // q
        q *= p
    return total


def vp_int(a: int, p: int) -> int:
    if a == 0:
        raise ConfigError("v_p(0) is infinite")
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    return v


@dataclass
class MultinomialValuation:
    p: int
    m: int
    parts: tuple[int, ...]
    valuation: int
    bound_ok: bool


def vp_multinomial(p: int, m: int, parts) -> MultinomialValuation:
    """Exact p-adic valuation of the multinomial coefficient (p^m; parts),
    with the per-part bound v_p(coef) + v_p(part) >= m."""
    parts = tuple(int(x) for x in parts)
    if sum(parts) != p ** m:
        raise ConfigError(f"parts {parts} do not sum to {p}^{m}")
    v = vp_factorial(p ** m, p) - sum(vp_factorial(a, p) for a in parts)
    ok = all(v + vp_int(a, p) >= m for a in parts if a)
    return MultinomialValuation(p, m, parts, v, ok)


def cyclotomic_order(c: RingElement, spec: TowerSpec) -> Fraction | None:
    """pi-adic order normalized so v(p) = 1; None means indeterminate (zero
    at the working truncation)."""
    if spec.scenario != CYCLOTOMIC:
        raise ConfigError("cyclotomic order requires the cyclotomic scenario")
    if c.rep != "residue":
        c = c.to_residue()
    return c.order()
