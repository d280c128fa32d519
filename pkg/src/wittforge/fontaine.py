"""Fontaine's theta at finite precision, kernel division, and scenarios.

A scenario fixes the prime, the target level n, and the element B whose
quotient A = B / ([p-flat] - p) carries the coordinate-transformation
coefficient: theta(A) mod p^n is the level-n coefficient.

Precision policy: tilt depth D = 2n + 2, height N = D, char-0 working
modulus exponent m' = n + 2.  Coordinate A_k consumes k+1 divisions, and
its sharp value at precision n-k is evaluated through the pending
denominator, which costs the same budget again; D = 2n+2 covers every
level needed by the worked examples (n <= 3) and the guard-insensitivity
suite validates the policy empirically rather than by fiat.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ConfigError, InsufficientDepthError, NotDivisibleError
from .tilt import TiltElement, TiltRing, make_tilt
from .towers import AFFINE, CYCLOTOMIC, S_PLUS_T, TowerSpec
from .wittpoly import (
    WittCache,
    WittVector,
    default_cache,
    int_multiple,
    minus_one_vector,
    p_vector,
    teichmuller,
)


def precision_policy(n: int) -> tuple[int, int, int]:
    """(depth D, height N, char-0 modulus exponent m') for target level n."""
    D = 2 * n + 2
    return D, D, n + 2


@dataclass
class Scenario:
    p: int
    n: int
    tag: str
    spec: TowerSpec
    D: int
    m_prime: int
    ring: TiltRing
    B: WittVector
    pflat: TiltElement
    ker: WittVector
    coeff_system: str
    cache: WittCache = field(repr=False, default=None)

    @property
    def N(self) -> int:
        return self.spec.N


def build_scenario(
    p: int,
    n: int,
    tag: str,
    affine_params=None,
    D: int | None = None,
    N: int | None = None,
    m_prime: int | None = None,
    cache: WittCache | None = None,
) -> Scenario:
    if n < 1:
        raise ConfigError(f"level n = {n} must be >= 1")
    if tag not in (S_PLUS_T, AFFINE, CYCLOTOMIC):
        raise ConfigError(f"unsupported scenario tag {tag!r}")
    d_def, n_def, m_def = precision_policy(n)
    D = d_def if D is None else D
    N = max(n_def, D) if N is None else N
    m_prime = m_def if m_prime is None else m_prime
    if D < n + 1:
        raise ConfigError(f"depth D = {D} cannot support level {n}")
    if N < D:
        raise ConfigError(f"height N = {N} must be >= depth D = {D}")
    if m_prime < n + 1:
        raise ConfigError(f"working modulus exponent m' = {m_prime} must exceed level {n}")
    cache = cache or default_cache()

    Dw = None
    if tag == CYCLOTOMIC:
        Dw = D if p != 2 else D + 1
    spec = TowerSpec(p, N, tag, affine_params=affine_params, Dw=Dw)
    ring = TiltRing(spec, D)

    if tag == S_PLUS_T:
        B = (
            teichmuller(ring, make_tilt(spec, "Sflat", D), n)
            .add(teichmuller(ring, make_tilt(spec, "Tflat", D), n), cache)
            .add(minus_one_vector(ring, n), cache)
        )
        system = "R_n = Z[T^{1/p^n}, S^{1/p^n}] via canonical monomial lifts"
    elif tag == AFFINE:
        a, b = spec.affine_params
        tpart = teichmuller(ring, make_tilt(spec, "Tflat", D), n)
        lin = int_multiple(ring, a, n, cache).mul(tpart, cache)
        lin = lin.add(int_multiple(ring, b, n, cache), cache)
        B = teichmuller(ring, make_tilt(spec, "Sflat", D), n).sub(lin, cache)
        system = f"R_n = Z[T^{{1/p^n}}, S^{{1/p^n}}], S = {a}*T + {b}"
    else:
        if p == 2:
            B = teichmuller(ring, make_tilt(spec, "minus-oneflat", D), n).add(
                teichmuller(ring, ring.one(), n), cache
            )
            system = "R_n = Z[zeta_{2^{n+1}}] via canonical monomial lifts"
        else:
            B = teichmuller(ring, make_tilt(spec, "oneflat", D), n).add(
                minus_one_vector(ring, n), cache
            )
            system = "R_n = Z[zeta_{p^n}] via canonical monomial lifts"

    pflat = make_tilt(spec, "pflat", D)
    ker = teichmuller(ring, pflat, n).sub(p_vector(ring, n), cache)
    return Scenario(p, n, tag, spec, D, m_prime, ring, B, pflat, ker, system, cache)


def theta(X: WittVector, m: int, spec: TowerSpec):
    """Sum_{k<m} p^k * sharp_k(X_k) assembled mod p^m in the char-0 ring."""
    if len(X) < m:
        raise InsufficientDepthError(
            f"theta mod p^{m} needs Witt length >= {m}, have {len(X)}"
        )
    total = spec.zero(mod=m)
    for k in range(m):
        total = total + X[k].sharp(k, m, extra_p=k)
    return total


def divide_by_ker_generator(X: WittVector, scenario: Scenario) -> WittVector:
    """Solve ([p-flat] - p) * y = X coordinatewise (the inductive algorithm).

    y_0 = X_0 / p-flat; for m >= 1 the partial quotient is multiplied back,
    the first m coordinates of the difference must vanish (otherwise theta(X)
    was nonzero at working precision), and coordinate m is divided by
    (p-flat)^{p^m}.
    """
    ring, cache = scenario.ring, scenario.cache
    n = len(X)
    try:
        ys = [X[0].divide_by_pflat_power(0)]
    except NotDivisibleError as exc:
        raise NotDivisibleError(f"X_0 not divisible by p-flat: {exc}") from exc
    zero = ring.zero()
    for m in range(1, n):
        Y = WittVector(ring, ys + [zero] * (n - m))
        Z = X.sub(scenario.ker.mul(Y, cache), cache)
        for i in range(m):
            if not Z[i].is_zero():
                raise NotDivisibleError(
                    f"coordinate {i} of the remainder is nonzero at step {m}; "
                    "theta of the dividend does not vanish at working precision"
                )
        ys.append(Z[m].divide_by_pflat_power(m))
    return WittVector(ring, ys)


def kernel_quotient(scenario: Scenario) -> WittVector:
    return divide_by_ker_generator(scenario.B, scenario)


def theta_of_A(scenario: Scenario):
    """theta(B / ([p-flat]-p)) reduced mod p^n, in canonical char-0 normal form."""
    A = kernel_quotient(scenario)
    return theta(A, scenario.n, scenario.spec).reduce_mod(scenario.n)


def multiply_back_check(scenario: Scenario, A: WittVector) -> bool:
    """([p-flat]-p) * A agrees with B coordinatewise to the reliable depth."""
    prod = scenario.ker.mul(A, scenario.cache)
    return all(prod[i] == scenario.B[i] for i in range(len(A)))
