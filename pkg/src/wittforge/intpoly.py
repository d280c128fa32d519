"""Sparse integer polynomials in the Witt variables X_0..X_i, Y_0..Y_i.

A monomial is keyed by a tuple of 2*(i+1) exponents: the X-block followed by
the Y-block.  Coefficients are arbitrary-precision integers and zero
coefficients are never stored.  These polynomials back the universal Witt
polynomial recursion and serve as the torsion-free oracle ring for ghost
tests, so all arithmetic is exact.
"""

from __future__ import annotations

from .errors import ResourceLimitError

DEFAULT_MONOMIAL_CAP = 5_000_000


class IntPoly:
    """Exact multivariate polynomial over the integers.

    ``nvars`` is fixed per polynomial; arithmetic requires equal ``nvars``.
    """

    __slots__ = ("nvars", "coeffs")

    def __init__(self, nvars: int, coeffs: dict[tuple[int, ...], int] | None = None):
        self.nvars = nvars
        self.coeffs = {}
        if coeffs:
            for exps, c in coeffs.items():
                if c:
                    self.coeffs[exps] = c

    @classmethod
    def zero(cls, nvars: int) -> "IntPoly":
        return cls(nvars)

    @classmethod
    def const(cls, nvars: int, c: int) -> "IntPoly":
        if c == 0:
            return cls(nvars)
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, index: int, exp: int = 1, coeff: int = 1) -> "IntPoly":
        exps = [0] * nvars
        exps[index] = exp
        return cls(nvars, {tuple(exps): coeff})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        return isinstance(other, IntPoly) and self.nvars == other.nvars and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.nvars, frozenset(self.coeffs.items())))

    def __len__(self) -> int:
        return len(self.coeffs)

    def __add__(self, other: "IntPoly") -> "IntPoly":
        assert self.nvars == other.nvars
        out = dict(self.coeffs)
        for exps, c in other.coeffs.items():
            v = out.get(exps, 0) + c
            if v:
                out[exps] = v
            else:
                out.pop(exps, None)
        return IntPoly(self.nvars, out)

    def __neg__(self) -> "IntPoly":
        return IntPoly(self.nvars, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other: "IntPoly") -> "IntPoly":
        return self + (-other)

    def mul(self, other: "IntPoly", cap: int | None = None) -> "IntPoly":
        assert self.nvars == other.nvars
        out: dict[tuple[int, ...], int] = {}
        a, b = self.coeffs, other.coeffs
        if len(a) > len(b):
            a, b = b, a
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                exps = tuple(x + y for x, y in zip(e1, e2))
                v = out.get(exps, 0) + c1 * c2
                if v:
                    out[exps] = v
                else:
                    out.pop(exps, None)
            if cap is not None and len(out) > cap:
                raise ResourceLimitError(
                    f"monomial count {len(out)} exceeded cap {cap} during multiplication"
                )
        return IntPoly(self.nvars, out)

    def __mul__(self, other: "IntPoly") -> "IntPoly":
        return self.mul(other)

    def scale(self, c: int) -> "IntPoly":
        if c == 0:
            return IntPoly(self.nvars)
        return IntPoly(self.nvars, {e: c * v for e, v in self.coeffs.items()})

    def pow(self, n: int, cap: int | None = None) -> "IntPoly":
        assert n >= 0
        result = IntPoly.const(self.nvars, 1)
        base = self
        while n:
            if n & 1:
                result = result.mul(base, cap)
            n >>= 1
            if n:
                base = base.mul(base, cap)
        return result

    def __pow__(self, n: int) -> "IntPoly":
        return self.pow(n)

    def exact_div_int(self, d: int) -> "IntPoly":
        out = {}
        for exps, c in self.coeffs.items():
            q, r = divmod(c, d)
            if r:
                raise ArithmeticError(
                    f"non-exact division by {d} in universal polynomial recursion"
                )
            out[exps] = q
        return IntPoly(self.nvars, out)

    def reduce_coeffs(self, modulus: int) -> "IntPoly":
        out = {}
        for exps, c in self.coeffs.items():
            v = c % modulus
            if v:
                out[exps] = v
        return IntPoly(self.nvars, out)

    def substitute_powers(self, scale: list[int]) -> "IntPoly":
        """Map variable j to its scale[j]-th power."""
        out = {}
        for exps, c in self.coeffs.items():
            key = tuple(e * s for e, s in zip(exps, scale))
            out[key] = out.get(key, 0) + c
        return IntPoly(self.nvars, out)

    def evaluate(self, values: list, ring):
        """Evaluate at ``values`` (one per variable) inside ``ring``.

        ``ring`` supplies zero()/one()/from_int()/add()/mul()/pow(); per-variable
        power tables are cached so repeated exponents cost one lookup.
        """
        total = ring.zero()
        pow_cache: list[dict[int, object]] = [dict() for _ in range(self.nvars)]

        def vpow(j, e):
            cache = pow_cache[j]
            got = cache.get(e)
            if got is None:
                got = ring.pow(values[j], e)
                cache[e] = got
            return got

        for exps, c in sorted(self.coeffs.items()):
            term = ring.from_int(c)
            for j, e in enumerate(exps):
                if e:
                    term = ring.mul(term, vpow(j, e))
            total = ring.add(total, term)
        return total

    def sorted_items(self):
        return sorted(self.coeffs.items())

    def __repr__(self):
        if not self.coeffs:
            return "IntPoly(0)"
        parts = []
        for exps, c in self.sorted_items():
            vars_ = " ".join(f"v{j}^{e}" for j, e in enumerate(exps) if e)
            parts.append(f"{c} {vars_}".strip())
        return "IntPoly(" + " + ".join(parts) + ")"
