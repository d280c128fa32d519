"""Finite-depth model of the tilted ring of integers.

A :class:`TiltElement` is a Frobenius-compatible vector of residue-ring
coordinates c_0..c_D (coordinate j plays the role of the p^j-th root), with
two ledgers:

* ``top``  -- the deepest coordinate guaranteed exact.  Creation gives D,
  arithmetic takes the minimum, division decrements by one.
* ``e``    -- a pending denominator exponent: the element represents
  (coordinate vector) / (p-flat)^e.  Quotients by p-flat powers are carried
  exactly in this form because the finitely presented residue ring usually
  cannot express them as polynomials (they live in a larger ring of
  integers); every consumer that needs a value (the sharp maps) performs the
  corresponding exact x-power division at characteristic zero, where the
  p-divisibility created by the defining relations becomes visible.

Addition scales numerators to a common denominator by multiplying with
p-flat coordinate powers, which is exact monomial arithmetic.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import (
    ConfigError,
    InsufficientDepthError,
    NotDivisibleError,
    SpecMismatchError,
)
from .towers import CYCLOTOMIC, S_PLUS_T, TowerSpec


class TiltElement:
    __slots__ = ("spec", "D", "coords", "e", "top")

    def __init__(self, spec: TowerSpec, D: int, coords, e: int = 0, top: int | None = None):
        self.spec = spec
        self.D = D
        self.e = e
        self.top = D if top is None else top
        zero = spec.zero(rep="residue")
        cs = list(coords)
        if len(cs) != D + 1:
            raise ConfigError(f"expected {D + 1} coordinates, got {len(cs)}")
        for j in range(self.top + 1, D + 1):
            cs[j] = zero
        self.coords = tuple(cs)

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_top_seed(cls, spec, D, top_value):
        """Tilt with coordinate j = top_value^{p^{D-j}} (automatically compatible)."""
        coords = [None] * (D + 1)
        coords[D] = top_value
        for j in range(D - 1, -1, -1):
            coords[j] = coords[j + 1] ** spec.p
        return cls(spec, D, coords)

    def copy_with(self, coords=None, e=None, top=None):
        return TiltElement(
            self.spec,
            self.D,
            self.coords if coords is None else coords,
            self.e if e is None else e,
            self.top if top is None else top,
        )

    # -- bookkeeping ----------------------------------------------------------

    def _check(self, other: "TiltElement"):
        if self.spec.key() != other.spec.key():
            raise SpecMismatchError("tilt elements over different specs")
        if self.D != other.D:
            raise SpecMismatchError(f"depth mismatch: {self.D} vs {other.D}")

    def _pflat_coord_power(self, j: int, power: int):
        """x^{power * p^{N-j}} as a residue element (coordinate j of p-flat^power)."""
        spec = self.spec
        exp = power * spec.p ** (spec.N - j)
        return spec.gen("x", rep="residue", exp=exp) if exp else spec.one(rep="residue")

    def scaled_coords(self, delta: int):
        """Numerator coordinates of the same element at denominator e + delta."""
        if delta == 0:
            return list(self.coords)
        out = []
        for j, c in enumerate(self.coords):
            if j > self.top or c.is_zero():
                out.append(self.spec.zero(rep="residue"))
            else:
                out.append(c.mul_x_power(delta * self.spec.p ** (self.spec.N - j)))
        return out

    def is_zero(self) -> bool:
        return all(self.coords[j].is_zero() for j in range(self.top + 1))

    def __eq__(self, other) -> bool:
        if not isinstance(other, TiltElement):
            return NotImplemented
        self._check(other)
        e = max(self.e, other.e)
        a = self.scaled_coords(e - self.e)
        b = other.scaled_coords(e - other.e)
        top = min(self.top, other.top)
        return all(a[j] == b[j] for j in range(top + 1))

    def __hash__(self):
        raise TypeError("TiltElement is unhashable (semantic equality)")

    # -- arithmetic ----------------------------------------------------------

    def _combine(self, other, fn):
        self._check(other)
        e = max(self.e, other.e)
        a = self.scaled_coords(e - self.e)
        b = other.scaled_coords(e - other.e)
        top = min(self.top, other.top)
        zero = self.spec.zero(rep="residue")
        coords = [fn(a[j], b[j]) if j <= top else zero for j in range(self.D + 1)]
        return TiltElement(self.spec, self.D, coords, e, top)

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b)

    def __mul__(self, other):
        self._check(other)
        top = min(self.top, other.top)
        zero = self.spec.zero(rep="residue")
        coords = [
            self.coords[j] * other.coords[j] if j <= top else zero
            for j in range(self.D + 1)
        ]
        return TiltElement(self.spec, self.D, coords, self.e + other.e, top)

    def __neg__(self):
        coords = [-c for c in self.coords]
        return self.copy_with(coords=coords)

    def __pow__(self, n: int):
        assert n >= 0
        result = make_tilt(self.spec, 1, self.D)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def frobenius(self) -> "TiltElement":
        coords = [c ** self.spec.p for c in self.coords]
        return self.copy_with(coords=coords, e=self.e * self.spec.p)

    def root(self) -> "TiltElement":
        """Coordinate shift (the inverse of Frobenius); needs a cleared denominator."""
        if self.e:
            raise NotDivisibleError("cannot take p-th root with a pending denominator")
        zero = self.spec.zero(rep="residue")
        coords = list(self.coords[1:]) + [zero]
        return TiltElement(self.spec, self.D, coords, 0, self.top - 1)

    # -- the sharp maps ---------------------------------------------------------

    def sharp_depth_needed(self, n: int, m: int, extra_p: int = 0) -> int:
        delta = max(0, -(-self.e // self.spec.p ** n) - extra_p)
        return n + m + delta - 1

    def sharp(self, n: int, m: int, extra_p: int = 0, extra_x: int = 0):
        """Canonical char-0 value of p^{extra_p} x^{extra_x} * (n-th sharp map),
        mod p^m.

        Computed from coordinate n+m'-1 raised to the p^{m'-1} power, where
        m' covers the precision consumed by the pending denominator; the
        denominator and the premultipliers fuse into one exact x-power shift.
        Folding the premultiplier in matters: a quotient like A_k can have
        sharp values with genuinely fractional p-power denominators,
        representable only after multiplying p^k back (theta's k-th term).
        """
        spec = self.spec
        if n > spec.N:
            raise InsufficientDepthError(f"sharp index {n} exceeds height {spec.N}")
        pN = spec.p ** spec.N
        net = self.e * spec.p ** (spec.N - n) - extra_p * pN - extra_x
        delta = max(0, -(-net // pN)) if net > 0 else 0
        mm = m + delta
        j = n + mm - 1
        if j > self.top:
            raise InsufficientDepthError(
                f"sharp_{n} at precision p^{m} needs coordinate {j}, ledger allows {self.top}"
            )
        val = self.coords[j].lift_char0(mm).pow_p_tower(mm - 1)
        if net > 0:
            val = val.exact_divide(net)
        elif net < 0:
            val = val.mul_x_power(-net)
        return val.reduce_mod(m)

    # -- division by p-flat powers -------------------------------------------------

    def divide_by_pflat_power(self, k: int) -> "TiltElement":
        """Exact division by (p-flat)^{p^k}.

        When the top trusted coordinate carries the x-powers, it is divided
        outright and the lower coordinates are rebuilt by Frobenius descent
        (one descent annihilates the quotient's ambiguity modulo the divisor's
        annihilator).  Otherwise the quotient is carried as a pending
        denominator.  Either way the reliable top decreases by one.
        """
        if k >= self.top:
            raise InsufficientDepthError(
                f"division at level {k} needs reliable depth > {k}, have {self.top}"
            )
        total = self.e + self.spec.p ** k
        self._integrality_precheck(total)
        cancelled = self._cancel_at(self.top, total)
        if cancelled is not None:
            return cancelled
        return self.copy_with(e=total, top=self.top - 1)

    def _integrality_precheck(self, total_e: int):
        """Necessary valuation test at the deepest trusted coordinate.

        Only single-monomial coordinates are rejected here: for them the
        monomial order equals the true valuation.  On sums the monomial
        minimum can underestimate the valuation (leading parts may cancel in
        the residue field), so genuine failures of mixed dividends surface
        later, at sharp evaluation or multiply-back verification.
        """
        j = self.top
        while j >= 0 and self.coords[j].is_zero():
            j -= 1
        if j < 0:
            return
        if len(self.coords[j].coeffs) != 1:
            return
        ord_j = self.coords[j].order()
        needed = Fraction(total_e, self.spec.p ** j)
        if ord_j < needed:
            raise NotDivisibleError(
                f"coordinate {j} has order {ord_j} < {needed}: dividend not in the ideal"
            )

    def _cancel_at(self, j: int, total_e: int) -> "TiltElement | None":
        """Divide coordinate j by x^{total_e * p^{N-j}} and Frobenius-descend below.

        Returns the denominator-free quotient with reliable top j-1, or None
        when the coordinate does not carry the x-powers.
        """
        spec = self.spec
        shift = total_e * spec.p ** (spec.N - j)
        if not self.coords[j].divisible_by_x(shift):
            return None
        zero = spec.zero(rep="residue")
        coords = [zero] * (self.D + 1)
        coords[j] = self.coords[j].exact_divide(shift)
        for i in range(j - 1, -1, -1):
            coords[i] = coords[i + 1] ** spec.p
        return TiltElement(spec, self.D, coords, 0, j - 1)

    # -- diagnostics -----------------------------------------------------------

    def frobenius_compatible(self) -> bool:
        return all(
            self.coords[j + 1] ** self.spec.p == self.coords[j]
            for j in range(self.top)
        )

    def __repr__(self):
        e = f", e={self.e}" if self.e else ""
        return f"<tilt D={self.D} top={self.top}{e} c0={self.coords[0].serialize() or '0'!s}>"


# ---------------------------------------------------------------------------
# Seeds


def make_tilt(spec: TowerSpec, seed, D: int) -> TiltElement:
    """Canonical tilt elements: p-flat, T-flat, S-flat, root-of-unity flats,
    and integer constants."""
    p, N = spec.p, spec.N
    if D < 1 or N < D:
        raise ConfigError(f"depth D={D} must satisfy 1 <= D <= N={N}")

    if isinstance(seed, int):
        c = spec.from_int(seed, rep="residue")
        return TiltElement(spec, D, [c] * (D + 1))

    if seed == "pflat":
        coords = [spec.gen("x", rep="residue", exp=p ** (N - j)) for j in range(D + 1)]
        return TiltElement(spec, D, coords)

    if seed in ("Tflat", "Sflat"):
        if spec.scenario == CYCLOTOMIC:
            raise ConfigError(f"seed {seed!r} undefined in the cyclotomic scenario")
        if seed == "Tflat":
            coords = [spec.gen("t", rep="residue", exp=p ** (N - j)) for j in range(D + 1)]
        else:
            coords = [
                spec.element(spec._free_gen_residue_pow(p ** (N - j)), rep="residue")
                for j in range(D + 1)
            ]
        return TiltElement(spec, D, coords)

    if seed in ("oneflat", "minus-oneflat"):
        if spec.scenario != CYCLOTOMIC:
            raise ConfigError(f"seed {seed!r} requires the cyclotomic scenario")
        if seed == "oneflat" and p == 2:
            raise ConfigError("1-flat is degenerate at p=2; use minus-oneflat")
        if seed == "minus-oneflat" and p != 2:
            raise ConfigError("minus-oneflat is the p=2 form; use oneflat")
        expected_Dw = D if p != 2 else D + 1
        if spec.Dw != expected_Dw:
            raise ConfigError(
                f"root order exponent Dw={spec.Dw} does not match depth D={D}"
            )
        coords = [
            spec.element(spec._free_gen_residue_pow(p ** (D - j)), rep="residue")
            for j in range(D + 1)
        ]
        return TiltElement(spec, D, coords)

    raise ConfigError(f"unknown tilt seed {seed!r}")


class TiltRing:
    """Coefficient-ring adapter so Witt vectors can take tilt coordinates."""

    char_p = True

    def __init__(self, spec: TowerSpec, D: int):
        self.spec = spec
        self.D = D
        self.p = spec.p

    def zero(self):
        return make_tilt(self.spec, 0, self.D)

    def one(self):
        return make_tilt(self.spec, 1, self.D)

    def from_int(self, c):
        return make_tilt(self.spec, c, self.D)

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def pow(self, a, n):
        return a ** n

    def frobenius(self, a):
        return a.frobenius()
