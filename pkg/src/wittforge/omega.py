"""Presented Kähler-differential modules of the finite tower levels.

Level n of the tower presents its differentials by one generator per
adjoined root with a diagonal relator:

    dp^{1/p^n}  killed by  p^{n+1-1/p^n}   (from delta(X^{p^n} - p)),
    dT^{1/p^n}  killed by  p^n             (from delta(Y^{p^n} - T)),
    dS^{1/p^n}  killed by  p^n,

with coefficients taken in the height-N tower ring mod p^m.  A form is a
coordinate vector over the generators; zero-ness is decided coordinatewise
by x-adic divisibility against the relator powers, which keeps equality of
forms canonical.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    ConfigError,
    NonRepresentableError,
    RepresentationError,
    SpecMismatchError,
)
from .towers import CYCLOTOMIC, RingElement, TowerSpec
from .wittpoly import WittVector


@dataclass(frozen=True)
class PresentedOmega:
    """Differential module of tower level n over the T,S-constants base
    (or over Z_p when ``base`` is "zp": no dT/dS generators)."""

    spec: TowerSpec
    level: int
    mod: int
    base: str = "k0"

    def __post_init__(self):
        if self.level < 0 or self.level > self.spec.N:
            raise ConfigError(f"level {self.level} outside tower height {self.spec.N}")
        if self.base not in ("k0", "zp"):
            raise ConfigError(f"unknown base {self.base!r}")
        if self.spec.scenario == CYCLOTOMIC and self.base == "k0":
            raise ConfigError("the cyclotomic scenario only presents the Z_p-base module")

    @property
    def generators(self) -> tuple[str, ...]:
        if self.base == "zp" or self.spec.scenario == CYCLOTOMIC:
            return ("dp",)
        return ("dp", "dT", "dS")

    def annihilator_exponent(self, gen: str) -> int:
        """The relator's x-exponent: p^{n+1-1/p^n} for dp, p^n for dT/dS."""
        p, N, n = self.spec.p, self.spec.N, self.level
        if gen == "dp":
            return (n + 1) * p ** N - p ** (N - n)
        if gen in ("dT", "dS"):
            return n * p ** N
        raise ConfigError(f"unknown generator {gen!r}")

    def annihilator(self, gen: str) -> Fraction:
        """The annihilator as a p-power exponent (e.g. Fraction(7,4) for
        p^{n+1-1/p^n} at p=2, n=2)."""
        return Fraction(self.annihilator_exponent(gen), self.spec.p ** self.spec.N)

    def zero(self) -> "DiffForm":
        z = self.spec.zero(mod=self.mod)
        return DiffForm(self, (z,) * len(self.generators))

    def form(self, **coords) -> "DiffForm":
        vec = []
        for g in self.generators:
            vec.append(coords.get(g, self.spec.zero(mod=self.mod)))
        return DiffForm(self, tuple(vec))

    def torsion_generator(self, gen: str) -> "DiffForm":
        """g^{1-1/p^n} dg^{1/p^n}: the p^n-torsion basis element for g."""
        p, N, n = self.spec.p, self.spec.N, self.level
        e = p ** N - p ** (N - n)
        name = {"dp": "x", "dT": "t", "dS": "s"}[gen]
        coeff = self.spec.gen(name, exp=e, mod=self.mod) if e else self.spec.one(mod=self.mod)
        return self.form(**{gen: coeff})


@dataclass(frozen=True)
class DiffForm:
    omega: PresentedOmega
    coords: tuple[RingElement, ...]

    def _check(self, other: "DiffForm"):
        if self.omega != other.omega:
            raise SpecMismatchError("forms live in different presented modules")

    def __add__(self, other: "DiffForm") -> "DiffForm":
        self._check(other)
        return DiffForm(self.omega, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "DiffForm") -> "DiffForm":
        self._check(other)
        return DiffForm(self.omega, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "DiffForm":
        return DiffForm(self.omega, tuple(-a for a in self.coords))

    def scale(self, c: RingElement) -> "DiffForm":
        return DiffForm(self.omega, tuple(c * a for a in self.coords))

    def scale_int(self, c: int) -> "DiffForm":
        return DiffForm(self.omega, tuple(a.scale_int(c) for a in self.coords))

    def is_zero(self) -> bool:
        """Coordinatewise x-adic divisibility by the diagonal relators."""
        for g, c in zip(self.omega.generators, self.coords):
            if not c.divisible_by_x(self.omega.annihilator_exponent(g)):
                return False
        return True

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiffForm):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        raise TypeError("DiffForm is unhashable (torsion equality)")

    def serialize(self):
        return {
            g: c.serialize().splitlines()
            for g, c in zip(self.omega.generators, self.coords)
        }


def pushforward(f: DiffForm, target: PresentedOmega) -> DiffForm:
    """Image at level n+1: dg^{1/p^n} -> p * g^{(p-1)/p^{n+1}} dg^{1/p^{n+1}}."""
    src = f.omega
    if target.spec is not src.spec or target.mod != src.mod or target.base != src.base:
        raise SpecMismatchError("pushforward requires the same presentation family")
    if target.level != src.level + 1:
        raise ConfigError("pushforward raises the level by exactly one")
    p, N = src.spec.p, src.spec.N
    shift = (p - 1) * p ** (N - target.level)
    names = {"dp": "x", "dT": "t", "dS": "s"}
    out = []
    for g, c in zip(src.generators, f.coords):
        mult = src.spec.gen(names[g], exp=shift, mod=src.mod).scale_int(p)
        out.append(c * mult)
    return DiffForm(target, tuple(out))


def nu_generator(omega: PresentedOmega) -> DiffForm:
    """nu_n(1 (x) 1) = p^{1-1/p^n} dp^{1/p^n}."""
    return omega.torsion_generator("dp")


def _level_partials(value: RingElement, omega: PresentedOmega) -> DiffForm:
    """d(value) over the level-n generators, for values inside the level-n
    subring (every exponent divisible by p^{N-n}); otherwise the value is not
    expressible over the presented generators."""
    spec = omega.spec
    p, N, n = spec.p, spec.N, omega.level
    step = p ** (N - n)
    gens = spec.gens("char0")
    ok, witness = value.lattice_membership({g: step for g in gens})
    if not ok:
        raise NonRepresentableError(
            f"sharp value has a monomial {witness} outside level {n}"
        )
    by_gen = {g: {} for g in omega.generators}
    gen_for = {"x": "dp", "t": "dT", "s": "dS"}
    for exps, c in value.coeffs.items():
        for gi, gname in enumerate(gens):
            e = exps[gi]
            if not e:
                continue
            target = gen_for.get(gname)
            if target is None or target not in by_gen:
                raise NonRepresentableError(
                    f"no differential generator for {gname} at this base"
                )
            k = e // step  # exponent in level-n units
            key = list(exps)
            key[gi] = e - step
            acc = by_gen[target]
            tup = tuple(key)
            acc[tup] = acc.get(tup, 0) + c * k
    coords = tuple(
        spec.element(by_gen[g], mod=omega.mod) for g in omega.generators
    )
    return DiffForm(omega, coords)


def dtheta_n(X: WittVector, omega: PresentedOmega) -> DiffForm:
    """The level-n component of the differential version of the theta map:

        sum_{k<n} (x_k^{sharp_{n-k}})^{p^{n-k}-1} d(x_k^{sharp_{n-k}})
        + d(theta of the n-shifted, p^n-th-rooted tail).
    """
    spec, n, m = omega.spec, omega.level, omega.mod
    p = spec.p
    total = omega.zero()
    for k in range(min(n, len(X))):
        val = X[k].sharp(n - k, m)
        dv = _level_partials(val, omega)
        factor = val ** (p ** (n - k) - 1)
        total = total + dv.scale(factor)
    # trailing term: theta((x_n^{1/p^n}, x_{n+1}^{1/p^n}, ...))
    tail_coords = []
    for j in range(n, len(X)):
        c = X[j]
        for _ in range(n):
            c = c.root()
        tail_coords.append(c)
    if tail_coords:
        from .fontaine import theta  # local import to avoid a cycle

        tail_value = theta(WittVector(X.ring, tail_coords), m, spec)
        total = total + _level_partials(tail_value, omega)
    return total


def basis_transform(coords, from_basis: str, to_basis: str, a_n: RingElement, omega: PresentedOmega):
    """Change torsion-basis coordinates using T-form + S-form = a_n * p-form.

    Bases are named "p,T" and "p,S"; coordinates are pairs over
    (p^{1-1/p^n}dp^{1/p^n}, X^{1-1/p^n}dX^{1/p^n}).  The swapped generator
    enters with coefficient -1, a unit, which is what makes this a basis
    change.
    """
    valid = {"p,T", "p,S"}
    if from_basis not in valid or to_basis not in valid:
        raise ConfigError(f"bases must be in {sorted(valid)}")
    alpha, beta = coords
    if from_basis == to_basis:
        return (alpha, beta)
    # X-form in the other basis: X-form = a_n * p-form - Y-form; the leading
    # coefficient of the swap is -1, a unit mod p by construction.
    return (alpha + beta * a_n, -beta)


def torsion_vector_form(omega: PresentedOmega, basis: str, coords) -> DiffForm:
    """Materialize basis coordinates as an honest DiffForm for equality tests."""
    alpha, beta = coords
    second = {"p,T": "dT", "p,S": "dS"}[basis]
    return (
        omega.torsion_generator("dp").scale(alpha)
        + omega.torsion_generator(second).scale(beta)
    )
