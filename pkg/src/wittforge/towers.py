"""Exact normal-form arithmetic in finitely presented root-tower rings.

A :class:`TowerSpec` fixes a prime ``p``, a height ``N`` and a scenario, and
presents a commutative ring by ordered generators, each bound generator
carrying one monic p-power relation over earlier generators:

* ``s-plus-t``     -- generators (x, t, s) with x^{p^N} = p, t free,
  s^{p^N} = 1 - t^{p^N}.  Models Z[p^{1/p^N}, T^{1/p^N}, S^{1/p^N}], S = 1-T.
* ``affine``       -- same shape with s^{p^N} = a*t^{p^N} + b for integer
  parameters (a, b) describing S = a*T + b.
* ``cyclotomic``   -- generators (x, w) with x^{p^N} = p and w a primitive
  root of unity of p-power order bound by its cyclotomic polynomial.

Elements come in three representations:

* ``char0``   -- normal form over the char-0 generators, coefficients exact
  integers or reduced mod p^m when a modulus exponent is attached;
* ``residue`` -- normal form mod p over the residue basis, where the change
  of variables u := s+t-1 (resp. pi := w-1) turns the ring into a tensor of
  a free part and nilpotent monomial parts;
* ``xadic``   -- char-0 mod p^m with integer coefficients expanded base-p
  into powers of x^{p^N}; all coefficients lie in {0, ..., p-1} and the
  x-exponent is < m*p^N.  Exact division by x-powers is an exponent shift
  in this representation.

Normal forms are unique per representation; the monomial order is
lexicographic on (generator index, exponent) and fixed globally.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import (
    ConfigError,
    NotDivisibleError,
    RepresentationError,
    SpecMismatchError,
)

S_PLUS_T = "s-plus-t"
AFFINE = "affine"
CYCLOTOMIC = "cyclotomic"
SCENARIOS = (S_PLUS_T, AFFINE, CYCLOTOMIC)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _dict_mul(a, b, modulus):
    out = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c % modulus for e, c in out.items() if c % modulus}


def _vp(c: int, p: int) -> int:
    v = 0
    while c % p == 0:
        c //= p
        v += 1
    return v


class TowerSpec:
    """Presentation of one tower ring; read-only after construction."""

    def __init__(self, p: int, N: int, scenario: str, affine_params=None, Dw: int | None = None):
        if not _is_prime(p):
            raise ConfigError(f"p = {p} is not prime")
        if N < 1:
            raise ConfigError(f"height N = {N} must be >= 1")
        if scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {scenario!r}")
        self.p = p
        self.N = N
        self.scenario = scenario
        self.affine_params = None
        self.Dw = None
        pN = p ** N

        if scenario == AFFINE:
            if affine_params is None:
                raise ConfigError("affine scenario requires integer parameters (a, b)")
            a, b = int(affine_params[0]), int(affine_params[1])
            if a % p == 0:
                # S = a*T + b with p | a makes S a p-th power in the residue
                # field, so the dp/dS pair is not a basis (unit condition).
                raise ConfigError(f"affine parameter a = {a} must be a unit mod p")
            self.affine_params = (a, b)
        elif affine_params is not None:
            raise ConfigError(f"affine parameters not accepted for scenario {scenario!r}")

        if scenario == CYCLOTOMIC:
            if Dw is None:
                raise ConfigError("cyclotomic scenario requires the root order exponent Dw")
            if Dw < 1 or (p == 2 and Dw < 2):
                raise ConfigError(f"cyclotomic root order exponent Dw = {Dw} too small")
            self.Dw = Dw
            self.phi = p ** (Dw - 1) * (p - 1)
            self.char0_gens = ("x", "w")
            self.residue_gens = ("x", "pi")
            self.char0_bounds = (pN, self.phi)
            self.residue_bounds = (pN, self.phi)
        else:
            self.phi = None
            self.char0_gens = ("x", "t", "s")
            self.residue_gens = ("x", "t", "u")
            self.char0_bounds = (pN, None, pN)
            self.residue_bounds = (pN, None, pN)

        self._char0_rules = self._build_char0_rules()
        self._lift_cache: dict = {}
        self._residue_pow_cache: dict = {}
        self._window_pow_cache: dict = {}
        self._window_rule_cache: dict = {}

    # -- presentation data -------------------------------------------------

    def _build_char0_rules(self):
        """(gen index, bound, replacement coeff dict) for each bound generator."""
        p, N = self.p, self.N
        pN = p ** N
        ng = len(self.char0_gens)

        def mono(idx_exps, c):
            e = [0] * ng
            for i, v in idx_exps:
                e[i] = v
            return tuple(e), c

        rules = []
        # x^{p^N} = p
        rules.append((0, pN, dict([mono([], p)])))
        if self.scenario == S_PLUS_T:
            # s^{p^N} = 1 - t^{p^N}
            rules.append((2, pN, dict([mono([], 1), mono([(1, pN)], -1)])))
        elif self.scenario == AFFINE:
            a, b = self.affine_params
            rules.append((2, pN, dict([mono([(1, pN)], a), mono([], b)])))
        else:
            # Phi_{p^Dw}(w) = sum_i w^{i p^{Dw-1}} = 0, i.e.
            # w^{(p-1)p^{Dw-1}} = -sum_{i<p-1} w^{i p^{Dw-1}}
            step = self.p ** (self.Dw - 1)
            repl = {}
            for i in range(self.p - 1):
                e, c = mono([(1, i * step)], -1)
                repl[e] = c
            rules.append((1, self.phi, repl))
        return rules

    def key(self):
        return (self.p, self.N, self.scenario, self.affine_params, self.Dw)

    def __repr__(self):
        return f"TowerSpec(p={self.p}, N={self.N}, scenario={self.scenario!r})"

    def gens(self, rep: str):
        return self.residue_gens if rep == "residue" else self.char0_gens

    def gen_index(self, name: str, rep: str) -> int:
        return self.gens(rep).index(name)

    # -- element constructors ----------------------------------------------

    def element(self, coeffs, rep="char0", mod=None):
        return RingElement(self, rep, mod, coeffs)

    def zero(self, rep="char0", mod=None):
        return RingElement(self, rep, mod, {})

    def one(self, rep="char0", mod=None):
        ng = len(self.gens(rep))
        return RingElement(self, rep, mod, {(0,) * ng: 1})

    def from_int(self, c, rep="char0", mod=None):
        ng = len(self.gens(rep))
        return RingElement(self, rep, mod, {(0,) * ng: c})

    def gen(self, name, rep="char0", mod=None, exp=1):
        ng = len(self.gens(rep))
        e = [0] * ng
        e[self.gen_index(name, rep)] = exp
        return RingElement(self, rep, mod, {tuple(e): 1})

    def monomial(self, rep, mod, coeff, **exps):
        ng = len(self.gens(rep))
        e = [0] * ng
        for name, v in exps.items():
            e[self.gen_index(name, rep)] = v
        return RingElement(self, rep, mod, {tuple(e): coeff})

    # -- normalization -----------------------------------------------------

    def _normalize_char0(self, coeffs, mod):
        modulus = None if mod is None else self.p ** mod
        out: dict[tuple[int, ...], int] = {}
        work = list(coeffs.items())
        rules = self._char0_rules
        while work:
            exps, c = work.pop()
            if modulus is not None:
                c %= modulus
            if not c:
                continue
            hit = None
            for gi, bound, repl in rules:
                if exps[gi] >= bound:
                    hit = (gi, bound, repl)
                    break
            if hit is None:
                v = out.get(exps, 0) + c
                if modulus is not None:
                    v %= modulus
                if v:
                    out[exps] = v
                else:
                    out.pop(exps, None)
                continue
            gi, bound, repl = hit
            base = list(exps)
            base[gi] -= bound
            for rexps, rc in repl.items():
                new = tuple(b + r for b, r in zip(base, rexps))
                work.append((new, c * rc))
        return out

    def _normalize_residue(self, coeffs):
        p = self.p
        bounds = self.residue_bounds
        out: dict[tuple[int, ...], int] = {}
        for exps, c in coeffs.items():
            c %= p
            if not c:
                continue
            if any(b is not None and e >= b for e, b in zip(exps, bounds)):
                continue
            v = (out.get(exps, 0) + c) % p
            if v:
                out[exps] = v
            else:
                out.pop(exps, None)
        return out

    # -- conversions ---------------------------------------------------------

    def _bound_gen_lift(self, exp: int, mod: int):
        """Char-0 expansion of u^exp (resp. pi^exp) at modulus exponent ``mod``."""
        key = (exp, mod)
        got = self._lift_cache.get(key)
        if got is not None:
            return got
        ng = len(self.char0_gens)
        if self.scenario == CYCLOTOMIC:
            base = {(0,) * ng: -1, (0, 1): 1}  # w - 1
        else:
            base = {(0,) * ng: -1, (0, 1, 0): 1, (0, 0, 1): 1}  # s + t - 1
        result = {(0,) * ng: 1}
        n = exp
        cur = base
        while n:
            if n & 1:
                result = self._mul_raw_char0(result, cur, mod)
            n >>= 1
            if n:
                cur = self._mul_raw_char0(cur, cur, mod)
        self._lift_cache[key] = result
        return result

    def _mul_raw_char0(self, a, b, mod):
        out: dict[tuple[int, ...], int] = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return self._normalize_char0(out, mod)

    def _free_gen_residue_pow(self, exp: int):
        """Residue expansion of s^exp (resp. w^exp) mod p."""
        got = self._residue_pow_cache.get(exp)
        if got is not None:
            return got
        ng = len(self.residue_gens)
        if self.scenario == CYCLOTOMIC:
            base = {(0,) * ng: 1, (0, 1): 1}  # 1 + pi
        else:
            base = {(0,) * ng: 1, (0, 0, 1): 1, (0, 1, 0): -1}  # u + 1 - t
        result = {(0,) * ng: 1}
        n = exp
        cur = base
        while n:
            if n & 1:
                result = self._mul_raw_residue(result, cur)
            n >>= 1
            if n:
                cur = self._mul_raw_residue(cur, cur)
        self._residue_pow_cache[exp] = result
        return result

    def _mul_raw_residue(self, a, b):
        out: dict[tuple[int, ...], int] = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return self._normalize_residue(out)

    # -- valuation weights ---------------------------------------------------

    def residue_order_weights(self):
        """Normalized order (v(p)=1) contributed by one exponent of each residue generator.

        v(x) = 1/p^N by the defining relation.  v(u) = 1/p^N because
        u^{p^N} = p*W with W a unit: the mixed multinomial term
        s^{p^{N-1}} t^{p^{N-1}} of (s+t-1)^{p^N} has p-valuation exactly one,
        so W mod p is a nonzero polynomial (same argument in the affine case,
        using that the leading affine parameter is a unit mod p).  v(pi) is
        1/phi by Eisenstein.
        """
        pN = self.p ** self.N
        if self.scenario == CYCLOTOMIC:
            return (Fraction(1, pN), Fraction(1, self.phi))
        return (Fraction(1, pN), Fraction(0), Fraction(1, pN))

    def _window_pow(self, exp: int, mod: int):
        """Window expansion of s^exp (resp. w^exp) over (t, u) (resp. (pi,)).

        The window basis replaces the bound non-x generator by its unipotent
        change of variables s = u + 1 - t (w = pi + 1), exactly in char 0,
        without reducing u (pi) exponents; monomial orders there are sound
        valuation lower bounds.
        """
        key = (exp, mod)
        got = self._window_pow_cache.get(key)
        if got is not None:
            return got
        modulus = self.p ** mod
        if self.scenario == CYCLOTOMIC:
            base = {(0,): 1, (1,): 1}  # pi + 1
        else:
            if self.scenario == AFFINE:
                a, b = self.affine_params
                base = {(0, 0): b, (1, 0): a, (0, 1): 1}  # u + a t + b
            else:
                base = {(0, 0): -1, (1, 0): 1, (0, 1): 1}  # u + 1 - t  -> (t, u) exps
        result = {(0,) * len(next(iter(base))): 1}
        n, cur = exp, base
        while n:
            if n & 1:
                result = _dict_mul(result, cur, modulus)
            n >>= 1
            if n:
                cur = _dict_mul(cur, cur, modulus)
        self._window_pow_cache[key] = result
        return result

    def _window_rule(self, mod: int):
        """Replacement for the bound window generator's p^N-th (phi-th) power.

        u^{p^N} equals the char-0 normal form of (s+t-1)^{p^N} (which is
        p times a unit and carries no u), and pi^{phi} the normal form of
        (w-1)^{phi}; rewriting window exponents below the bound makes
        monomial orders exact, because the sub-bound powers of u/x are
        linearly independent over the residue field.
        """
        key = mod
        got = self._window_rule_cache.get(key)
        if got is not None:
            return got
        if self.scenario == CYCLOTOMIC:
            bound = self.phi
            base = self.gen("w", mod=mod) - self.one(mod=mod)
        else:
            bound = self.p ** self.N
            if self.scenario == AFFINE:
                a, b = self.affine_params
                base = (
                    self.gen("s", mod=mod)
                    - self.gen("t", mod=mod).scale_int(a)
                    - self.from_int(b, mod=mod)
                )
            else:
                base = self.gen("s", mod=mod) + self.gen("t", mod=mod) - self.one(mod=mod)
        repl = (base ** bound).window_coeffs(reduce=False)
        self._window_rule_cache[key] = (bound, repl)
        return bound, repl

    def _window_reduce(self, coeffs, mod: int):
        bound, repl = self._window_rule(mod)
        idx = 1 if self.scenario == CYCLOTOMIC else 2
        modulus = self.p ** mod
        out: dict[tuple[int, ...], int] = {}
        work = list(coeffs.items())
        while work:
            e, c = work.pop()
            c %= modulus
            if not c:
                continue
            if e[idx] >= bound:
                base = list(e)
                base[idx] -= bound
                for re_, rc in repl.items():
                    ne = tuple(x + y for x, y in zip(base, re_))
                    work.append((ne, c * rc))
                continue
            v = (out.get(e, 0) + c) % modulus
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return out


class RingElement:
    """Sparse normal-form element of a tower ring.  Immutable after construction."""

    __slots__ = ("spec", "rep", "mod", "coeffs")

    def __init__(self, spec: TowerSpec, rep: str, mod: int | None, coeffs):
        if rep not in ("char0", "residue", "xadic"):
            raise RepresentationError(f"unknown representation {rep!r}")
        if rep == "residue":
            mod = 1
        if rep == "xadic" and mod is None:
            raise RepresentationError("x-adic representation requires a modulus")
        self.spec = spec
        self.rep = rep
        self.mod = mod
        if rep == "char0":
            self.coeffs = spec._normalize_char0(coeffs, mod)
        elif rep == "residue":
            self.coeffs = spec._normalize_residue(coeffs)
        else:
            self.coeffs = {e: c for e, c in coeffs.items() if c}

    # -- comparisons ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RingElement)
            and self.spec.key() == other.spec.key()
            and self.rep == other.rep
            and self.mod == other.mod
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.spec.key(), self.rep, self.mod, frozenset(self.coeffs.items())))

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check_compat(self, other: "RingElement"):
        if self.spec.key() != other.spec.key():
            raise SpecMismatchError("operands built over different tower specifications")
        if self.rep != other.rep:
            raise RepresentationError(f"representation mismatch: {self.rep} vs {other.rep}")
        if self.mod != other.mod:
            raise RepresentationError(f"modulus mismatch: p^{self.mod} vs p^{other.mod}")

    # -- ring operations -------------------------------------------------------

    def __add__(self, other: "RingElement") -> "RingElement":
        self._check_compat(other)
        if self.rep == "xadic":
            return (self.from_x_adic() + other.from_x_adic()).to_x_adic()
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return RingElement(self.spec, self.rep, self.mod, out)

    def __neg__(self) -> "RingElement":
        if self.rep == "xadic":
            return (-self.from_x_adic()).to_x_adic()
        return RingElement(self.spec, self.rep, self.mod, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other: "RingElement") -> "RingElement":
        return self + (-other)

    def __mul__(self, other: "RingElement") -> "RingElement":
        self._check_compat(other)
        if self.rep == "xadic":
            return (self.from_x_adic() * other.from_x_adic()).to_x_adic()
        a, b = self.coeffs, other.coeffs
        if len(a) > len(b):
            a, b = b, a
        out: dict[tuple[int, ...], int] = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return RingElement(self.spec, self.rep, self.mod, out)

    def scale_int(self, c: int) -> "RingElement":
        return RingElement(self.spec, self.rep, self.mod, {e: c * v for e, v in self.coeffs.items()})

    def __pow__(self, n: int) -> "RingElement":
        assert n >= 0
        if self.rep == "xadic":
            return (self.from_x_adic() ** n).to_x_adic()
        ng = len(self.spec.gens(self.rep))
        result = RingElement(self.spec, self.rep, self.mod, {(0,) * ng: 1})
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def pow_p_tower(self, k: int) -> "RingElement":
        """Raise to the p^k-th power by k successive p-th powers.

        Valid at fixed modulus: a mod p^{m-1} already determines a^p mod p^m,
        so iterating at modulus p^m is exact.
        """
        out = self
        for _ in range(k):
            out = out ** self.spec.p
        return out

    # -- representation changes -------------------------------------------------

    def reduce_mod(self, mexp: int) -> "RingElement":
        if self.rep == "residue":
            if mexp != 1:
                raise RepresentationError("residue elements live mod p")
            return self
        if self.mod is not None and mexp > self.mod:
            raise RepresentationError(f"cannot raise modulus p^{self.mod} -> p^{mexp}")
        if self.rep == "xadic":
            return self.from_x_adic().reduce_mod(mexp).to_x_adic()
        return RingElement(self.spec, "char0", mexp, self.coeffs)

    def to_x_adic(self) -> "RingElement":
        if self.rep == "xadic":
            return self
        if self.rep != "char0" or self.mod is None:
            raise RepresentationError("x-adic expansion needs a char-0 element mod p^m")
        spec, p, m = self.spec, self.spec.p, self.mod
        pN = p ** spec.N
        cutoff = m * pN
        out: dict[tuple[int, ...], int] = {}
        for exps, c in self.coeffs.items():
            base_x = exps[0]
            rest = exps[1:]
            i = 0
            while c:
                c, digit = divmod(c, p)
                if digit:
                    xe = base_x + i * pN
                    if xe < cutoff:
                        key = (xe,) + rest
                        out[key] = digit
                i += 1
        return RingElement(spec, "xadic", m, out)

    def from_x_adic(self) -> "RingElement":
        if self.rep != "xadic":
            raise RepresentationError("element is not in x-adic representation")
        spec, p = self.spec, self.spec.p
        pN = p ** spec.N
        out: dict[tuple[int, ...], int] = {}
        for exps, c in self.coeffs.items():
            q, r = divmod(exps[0], pN)
            key = (r,) + exps[1:]
            out[key] = out.get(key, 0) + c * p ** q
        return RingElement(spec, "char0", self.mod, out)

    def to_residue(self) -> "RingElement":
        """Reduce mod p and rewrite over the residue basis (u resp. pi)."""
        if self.rep == "residue":
            return self
        if self.rep == "xadic":
            return self.from_x_adic().to_residue()
        spec = self.spec
        ng = len(spec.residue_gens)
        acc: dict[tuple[int, ...], int] = {}
        free_idx = 2 if spec.scenario != CYCLOTOMIC else 1
        for exps, c in self.coeffs.items():
            c %= spec.p
            if not c:
                continue
            sub = spec._free_gen_residue_pow(exps[free_idx])
            if spec.scenario == CYCLOTOMIC:
                head = (exps[0], 0)
            else:
                head = (exps[0], exps[1], 0)
            for se, sc in sub.items():
                e = tuple(h + s for h, s in zip(head, se))
                acc[e] = acc.get(e, 0) + c * sc
        return RingElement(spec, "residue", 1, acc)

    def lift_char0(self, mexp: int) -> "RingElement":
        """Canonical char-0 lift: coefficients to {0..p-1}, u -> s+t-1, pi -> w-1."""
        if self.rep != "residue":
            raise RepresentationError("lift_char0 expects a residue element")
        spec = self.spec
        bound_idx = 2 if spec.scenario != CYCLOTOMIC else 1
        acc: dict[tuple[int, ...], int] = {}
        for exps, c in self.coeffs.items():
            sub = spec._bound_gen_lift(exps[bound_idx], mexp)
            if spec.scenario == CYCLOTOMIC:
                head = (exps[0], 0)
            else:
                head = (exps[0], exps[1], 0)
            for se, sc in sub.items():
                e = tuple(h + s for h, s in zip(head, se))
                acc[e] = acc.get(e, 0) + c * sc
        return RingElement(spec, "char0", mexp, acc)

    # -- division and lattice ops -------------------------------------------------

    def exact_divide(self, shift) -> "RingElement":
        """Divide by x^shift (shift="p" means the integer p, i.e. x^{p^N}).

        Residue and x-adic representations divide by an exponent shift;
        char-0 elements are converted through the x-adic representation.
        """
        spec = self.spec
        if shift == "p":
            shift = spec.p ** spec.N
        shift = int(shift)
        if shift < 0:
            raise NotDivisibleError("negative shift")
        if shift == 0:
            return self
        if self.rep == "char0":
            return self.to_x_adic().exact_divide(shift).from_x_adic()
        out = {}
        for exps, c in self.coeffs.items():
            if exps[0] < shift:
                raise NotDivisibleError(
                    f"monomial with x-exponent {exps[0]} not divisible by x^{shift}"
                )
            out[(exps[0] - shift,) + exps[1:]] = c
        return RingElement(spec, self.rep, self.mod, out)

    def divisible_by_x(self, shift) -> bool:
        try:
            self.exact_divide(shift)
        except NotDivisibleError:
            return False
        return True

    def mul_x_power(self, shift: int) -> "RingElement":
        """Multiply by x^shift (normalizing through the relations)."""
        if self.rep == "xadic":
            return (self.from_x_adic().mul_x_power(shift)).to_x_adic()
        out = {(e[0] + shift,) + e[1:]: c for e, c in self.coeffs.items()}
        return RingElement(self.spec, self.rep, self.mod, out)

    def lattice_membership(self, constraints: dict[str, int]):
        """Check exponent-divisibility constraints; return (ok, witness).

        ``constraints`` maps generator names to required divisors; a divisor
        d means every stored monomial must have that exponent divisible by d.
        """
        if self.rep != "char0":
            raise RepresentationError("lattice membership is decided on char-0 normal forms")
        gens = self.spec.gens(self.rep)
        idx = [(gens.index(name), d) for name, d in constraints.items()]
        for exps in sorted(self.coeffs):
            for gi, d in idx:
                if d and exps[gi] % d:
                    return False, exps
        return True, None

    def reindex(self, new_spec: TowerSpec) -> "RingElement":
        """Image under the height-raising embedding g -> g'^{p^{N'-N}}."""
        old, new = self.spec, new_spec
        if new.scenario != old.scenario or new.p != old.p:
            raise SpecMismatchError("reindex requires the same scenario and prime")
        if new.N < old.N:
            raise SpecMismatchError(f"cannot reindex down: N'={new.N} < N={old.N}")
        scale_tower = old.p ** (new.N - old.N)
        if old.scenario == CYCLOTOMIC:
            if new.Dw < old.Dw:
                raise SpecMismatchError("cannot reindex down in root order")
            scale_w = old.p ** (new.Dw - old.Dw)
            scales = (scale_tower, scale_w)
        else:
            scales = (scale_tower,) * 3
        out = {}
        for exps, c in self.coeffs.items():
            key = tuple(e * s for e, s in zip(exps, scales))
            out[key] = out.get(key, 0) + c
        return RingElement(new, self.rep, self.mod, out)

    # -- honest congruence via the window basis --------------------------------------

    def window_coeffs(self, reduce: bool = True):
        """Exponent dict over the window basis (x, t, u) resp. (x, pi).

        Exact unipotent substitution of the bound non-x generator.  With
        ``reduce`` the bound generator's exponents are rewritten below p^N
        (phi) through the defining relation, which makes monomial orders
        exact valuations rather than lower bounds.
        """
        if self.rep != "char0" or self.mod is None:
            raise RepresentationError("window form needs a char-0 element mod p^m")
        spec = self.spec
        modulus = spec.p ** self.mod
        sub_idx = 1 if spec.scenario == CYCLOTOMIC else 2
        out: dict[tuple[int, ...], int] = {}
        for exps, c in self.coeffs.items():
            sub = spec._window_pow(exps[sub_idx], self.mod)
            for se, sc in sub.items():
                if spec.scenario == CYCLOTOMIC:
                    key = (exps[0], se[0])
                else:
                    key = (exps[0], exps[1] + se[0], se[1])
                v = out.get(key, 0) + c * sc
                out[key] = v
        out = {e: c % modulus for e, c in out.items() if c % modulus}
        if reduce:
            out = spec._window_reduce(out, self.mod)
        return out

    def window_min_order(self) -> Fraction | None:
        """Min over window monomials of v_p(coeff) + weighted exponents; None if zero."""
        spec = self.spec
        pN = spec.p ** spec.N
        w = self.window_coeffs()
        if not w:
            return None
        best = None
        for exps, c in w.items():
            if spec.scenario == CYCLOTOMIC:
                o = Fraction(exps[0], pN) + Fraction(exps[1], spec.phi)
            else:
                o = Fraction(exps[0] + exps[2], pN)
            o += _vp(c, spec.p)
            if best is None or o < best:
                best = o
        return best

    def congruent_mod(self, other: "RingElement", n: int) -> bool:
        """Congruence mod p^n in the ring of integers (not just the presented ring).

        Decided by the sound window-order bound on the difference; a True
        verdict is exact, a False verdict can in principle be a truncation
        artifact of the finite presentation.
        """
        if self.mod is None or self.mod < n:
            raise RepresentationError(f"need at least p^{n} precision to decide")
        diff = (self - other).reduce_mod(n)
        o = diff.window_min_order()
        return o is None or o >= n

    # -- inspection -----------------------------------------------------------------

    def order(self) -> Fraction | None:
        """Min monomial order, normalized so v(p)=1; None for the zero element.

        Sound on residue elements because the monomial basis is free: the
        nilpotent generators x and u (resp. pi) carry orders 1/p^N and
        1/(p^{Dw-1}(p-1)) exactly.
        """
        if self.rep != "residue":
            raise RepresentationError("order is computed on residue elements")
        if not self.coeffs:
            return None
        weights = self.spec.residue_order_weights()
        return min(sum(w * e for w, e in zip(weights, exps)) for exps in self.coeffs)

    def sorted_items(self):
        return sorted(self.coeffs.items())

    def serialize(self) -> str:
        """Canonical one-monomial-per-line form: ``coeff * g1^e1 * g2^e2``."""
        gens = self.spec.gens(self.rep)
        lines = []
        for exps, c in self.sorted_items():
            parts = [str(c)]
            for name, e in zip(gens, exps):
                if e:
                    parts.append(f"{name}^{e}")
            lines.append(" * ".join(parts))
        return "\n".join(lines)

    def pretty(self) -> str:
        """Human form with fractional exponents (p^(a/b), T^(a/b), ...)."""
        spec = self.spec
        pN = spec.p ** spec.N
        names = {"x": "p", "t": "T", "s": "S", "u": "(T+S-1)"}
        if spec.scenario == CYCLOTOMIC:
            names = {"x": "p", "w": f"zeta_{spec.p ** spec.Dw}", "pi": f"(zeta_{spec.p ** spec.Dw}-1)"}
        parts = []
        for exps, c in self.sorted_items():
            factors = [str(c)]
            for name, e in zip(spec.gens(self.rep), exps):
                if not e:
                    continue
                disp = names.get(name, name)
                if name in ("x", "t", "s", "u"):
                    frac = Fraction(e, pN)
                    factors.append(f"{disp}^({frac})" if frac != 1 else disp)
                else:
                    factors.append(f"{disp}^{e}" if e != 1 else disp)
            parts.append(" * ".join(factors))
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        mod = f" mod p^{self.mod}" if self.mod is not None else ""
        return f"<{self.rep}{mod}: {self.serialize() or '0'}>"
