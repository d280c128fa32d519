"""Universal p-typical Witt polynomials and truncated Witt-vector arithmetic.

The sum/product polynomials S_i, P_i are produced by the ghost recursion

    phi_i = (Phi(W_i(X), W_i(Y)) - sum_{k<i} p^k phi_k^{p^{i-k}}) / p^i

with exact integer division (a remainder is an invariant violation, never
truncated).  Results are cached in memory and, optionally, on disk; a disk
entry is one file per (p, i, kind) holding the monomials in canonical order,
bit-exact across platforms.

Truncated Witt vectors evaluate the cached polynomials coordinatewise over
any coefficient ring exposing the small adapter protocol below.  Negation is
multiplication by the Witt vector of -1; Verschiebung/Frobenius follow the
shift/p-power description valid over characteristic-p coefficients.
"""

from __future__ import annotations

import os
import tempfile
import threading
from dataclasses import dataclass, field

from .errors import CacheCorruptError, ResourceLimitError, WittForgeError
from .intpoly import DEFAULT_MONOMIAL_CAP, IntPoly

KINDS = ("sum", "product")


def ghost_vector_poly(p: int, i: int, nvars: int, offset: int) -> IntPoly:
    """W_i = sum_k p^k V_{offset+k}^{p^{i-k}} as an IntPoly in ``nvars`` variables."""
    out = IntPoly(nvars)
    for k in range(i + 1):
        out = out + IntPoly.var(nvars, offset + k, p ** (i - k), p ** k)
    return out


@dataclass
class UnivWittPoly:
    """One cached universal polynomial (exact integer coefficients)."""

    p: int
    index: int
    kind: str
    poly: IntPoly
    _mod_p: IntPoly | None = field(default=None, repr=False)

    def mod_p(self) -> IntPoly:
        if self._mod_p is None:
            self._mod_p = self.poly.reduce_coeffs(self.p)
        return self._mod_p

    def weighted_degrees(self) -> set[int]:
        """Set of weights sum_j p^j (e_{X_j}+e_{Y_j}) over all monomials."""
        n = self.index + 1
        weights = set()
        for exps in self.poly.coeffs:
            w = 0
            for j in range(n):
                w += self.p ** j * (exps[j] + exps[n + j])
            weights.add(w)
        return weights


def _compute_chain(p: int, kind: str, i: int, cap: int) -> list[IntPoly]:
    """phi_0..phi_i for the given Phi, computed from scratch."""
    nv = 2 * (i + 1)
    wx = [ghost_vector_poly(p, k, nv, 0) for k in range(i + 1)]
    wy = [ghost_vector_poly(p, k, nv, i + 1) for k in range(i + 1)]
    phis: list[IntPoly] = []
    for k in range(i + 1):
        if kind == "sum":
            target = wx[k] + wy[k]
        else:
            target = wx[k].mul(wy[k], cap)
        acc = target
        for j in range(k):
            acc = acc - phis[j].pow(p ** (k - j), cap).scale(p ** j)
        phi = acc.exact_div_int(p ** k)
        if len(phi) > cap:
            raise ResourceLimitError(
                f"universal polynomial ({p},{kind},{k}) has {len(phi)} monomials > cap {cap}"
            )
        phis.append(phi)
    return phis


def _project(poly: IntPoly, old_i: int, new_i: int) -> IntPoly:
    """Re-key phi_k from the 2(old_i+1)-variable space down to 2(new_i+1) variables."""
    n_old, n_new = old_i + 1, new_i + 1
    out = {}
    for exps, c in poly.coeffs.items():
        assert all(e == 0 for e in exps[n_new:n_old]) and all(
            e == 0 for e in exps[n_old + n_new:]
        )
        key = exps[:n_new] + exps[n_old:n_old + n_new]
        out[key] = c
    return IntPoly(2 * n_new, out)


HEADER_PREFIX = "wittforge-cache v1"


def _serialize(entry: UnivWittPoly) -> str:
    lines = [f"{HEADER_PREFIX} p={entry.p} kind={entry.kind} i={entry.index}"]
    n = entry.index + 1
    for exps, c in entry.poly.sorted_items():
        parts = [str(c)]
        for j in range(n):
            if exps[j]:
                parts.append(f"X{j}^{exps[j]}")
        for j in range(n):
            if exps[n + j]:
                parts.append(f"Y{j}^{exps[n + j]}")
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def _parse(text: str, path = None):
    lines = text.splitlines()
    if not lines:
        raise CacheCorruptError(path, "empty cache file")
    head = lines[0].split()
    if " ".join(head[:2]) != HEADER_PREFIX or len(head) != 5:
        raise CacheCorruptError(path, "bad header")
    try:
        p = int(head[2].removeprefix("p="))
        kind = head[3].removeprefix("kind=")
        i = int(head[4].removeprefix("i="))
    except ValueError:
        raise CacheCorruptError(path, "bad header fields")
    if kind not in KINDS:
        raise CacheCorruptError(path, f"bad kind {kind!r}")
    n = i + 1
    coeffs = {}
    for line in lines[1:]:
        if not line.strip():
            continue
        toks = line.split()
        try:
            c = int(toks[0])
            xs = [0] * n
            ys = [0] * n
            for tok in toks[1:]:
                name, e = tok.split("^")
                if name.startswith("X"):
                    xs[int(name[1:])] = int(e)
                elif name.startswith("Y"):
                    ys[int(name[1:])] = int(e)
                else:
                    raise ValueError(tok)
        except (ValueError, IndexError):
            raise CacheCorruptError(path, f"bad monomial line {line!r}")
        coeffs[tuple(xs) + tuple(ys)] = c
    return UnivWittPoly(p, i, kind, IntPoly(2 * n, coeffs))


class WittCache:
    """Memory + optional disk cache for universal Witt polynomials.

    Distinct (p, i, kind) entries may be computed concurrently; a computed
    polynomial is published all-or-nothing (temp file + rename on disk, single
    assignment in memory).
    """

    def __init__(self, directory: str | None = None, cap: int = DEFAULT_MONOMIAL_CAP):
        self.directory = directory
        self.cap = cap
        self._memory: dict[tuple[int, int, str], UnivWittPoly] = {}
        self._lock = threading.Lock()

    def path_for(self, p: int, i: int, kind: str) -> str:
        return os.path.join(self.directory, f"witt-p{p}-{kind}-{i}.txt")

    def get(self, p: int, i: int, kind: str) -> UnivWittPoly:
        if kind not in KINDS:
            raise WittForgeError(f"unknown universal polynomial kind {kind!r}")
        key = (p, i, kind)
        with self._lock:
            got = self._memory.get(key)
        if got is not None:
            return got
        if self.directory is not None:
            path = self.path_for(p, i, kind)
            if os.path.exists(path):
                with open(path, encoding="ascii") as fh:
                    entry = _parse(fh.read(), path)
                if (entry.p, entry.index, entry.kind) != key:
                    raise CacheCorruptError(path, "header does not match filename")
                with self._lock:
                    self._memory[key] = entry
                return entry
        chain = _compute_chain(p, kind, i, self.cap)
        entries = []
        for k, phi in enumerate(chain):
            e = UnivWittPoly(p, k, kind, _project(phi, i, k))
            entries.append(e)
        with self._lock:
            for k, e in enumerate(entries):
                self._memory.setdefault((p, k, kind), e)
            result = self._memory[key]
        if self.directory is not None:
            for e in entries:
                self._write(e)
        return result

    def _write(self, entry: UnivWittPoly):
        os.makedirs(self.directory, exist_ok=True)
        path = self.path_for(entry.p, entry.index, entry.kind)
        if os.path.exists(path):
            return
        data = _serialize(entry)
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="ascii") as fh:
                fh.write(data)
            os.replace(tmp, path)
        finally:
            if os.path.exists(tmp):
                os.unlink(tmp)

    def build(self, p: int, max_index: int):
        """Precompute and persist all polynomials up to ``max_index``."""
        for kind in KINDS:
            self.get(p, max_index, kind)
        return [self.path_for(p, i, kind) for kind in KINDS for i in range(max_index + 1)]

    def list_entries(self):
        if self.directory is None or not os.path.isdir(self.directory):
            return []
        return sorted(
            name for name in os.listdir(self.directory)
            if name.startswith("witt-p") and name.endswith(".txt")
        )

    def validate(self):
        """Recompute every disk entry from scratch and compare bit-exactly."""
        problems = []
        for name in self.list_entries():
            path = os.path.join(self.directory, name)
            with open(path, encoding="ascii") as fh:
                text = fh.read()
            try:
                entry = _parse(text, path)
            except CacheCorruptError:
                problems.append(path)
                continue
            fresh = _compute_chain(entry.p, entry.kind, entry.index, self.cap)[entry.index]
            fresh_entry = UnivWittPoly(
                entry.p, entry.index, entry.kind, _project(fresh, entry.index, entry.index)
            )
            if _serialize(fresh_entry) != text:
                problems.append(path)
        return problems


_default_cache: WittCache | None = None
_default_lock = threading.Lock()


def default_cache() -> WittCache:
    global _default_cache
    with _default_lock:
        if _default_cache is None:
            _default_cache = WittCache(os.environ.get("WITTFORGE_CACHE"))
        return _default_cache


def witt_poly(p: int, i: int, kind: str, cache: WittCache | None = None) -> UnivWittPoly:
    if i < 0:
        raise WittForgeError("index must be >= 0")
    return (cache or default_cache()).get(p, i, kind)


# ---------------------------------------------------------------------------
# Coefficient-ring adapters


class IntRing:
    """Plain integers (torsion-free ghost oracle)."""

    char_p = False

    def __init__(self, p):
        self.p = p

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, c):
        return c

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def pow(self, a, n):
        return a ** n


class IntPolyRing:
    """Multivariate integer polynomials (torsion-free ghost oracle)."""

    char_p = False

    def __init__(self, p, nvars):
        self.p = p
        self.nvars = nvars

    def zero(self):
        return IntPoly(self.nvars)

    def one(self):
        return IntPoly.const(self.nvars, 1)

    def from_int(self, c):
        return IntPoly.const(self.nvars, c)

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def pow(self, a, n):
        return a.pow(n)


class ResidueRing:
    """Residue ring of a tower spec (characteristic p)."""

    char_p = True

    def __init__(self, spec):
        self.spec = spec
        self.p = spec.p

    def zero(self):
        return self.spec.zero(rep="residue")

    def one(self):
        return self.spec.one(rep="residue")

    def from_int(self, c):
        return self.spec.from_int(c, rep="residue")

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def pow(self, a, n):
        return a ** n


class WittVector:
    """Truncated Witt vector: fixed length, coordinates in a coefficient ring."""

    __slots__ = ("ring", "coords")

    def __init__(self, ring, coords):
        self.ring = ring
        self.coords = tuple(coords)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, k):
        return self.coords[k]

    def __eq__(self, other):
        return (
            isinstance(other, WittVector)
            and self.ring is other.ring
            and self.coords == other.coords
        )

    def __repr__(self):
        return f"WittVector{self.coords!r}"

    def _poly(self, i, kind, cache):
        entry = witt_poly(self.ring.p, i, kind, cache)
        return entry.mod_p() if self.ring.char_p else entry.poly

    def _binary(self, other, kind, cache):
        if len(self) != len(other):
            raise WittForgeError("Witt vectors must have equal length")
        if self.ring is not other.ring:
            raise WittForgeError("Witt vectors must share a coefficient ring")
        out = []
        for i in range(len(self)):
            poly = self._poly(i, kind, cache)
            vals = list(self.coords[: i + 1]) + list(other.coords[: i + 1])
            out.append(poly.evaluate(vals, self.ring))
        return WittVector(self.ring, out)

    def add(self, other, cache=None):
        return self._binary(other, "sum", cache)

    def mul(self, other, cache=None):
        return self._binary(other, "product", cache)

    def __add__(self, other):
        return self.add(other)

    def __mul__(self, other):
        return self.mul(other)

    def neg(self, cache=None):
        return self.mul(minus_one_vector(self.ring, len(self)), cache)

    def __neg__(self):
        return self.neg()

    def sub(self, other, cache=None):
        return self.add(other.neg(cache), cache)

    def __sub__(self, other):
        return self.sub(other)

    def verschiebung(self):
        return WittVector(self.ring, (self.ring.zero(),) + self.coords[:-1])

    def frobenius(self):
        if not self.ring.char_p:
            raise WittForgeError("Frobenius requires characteristic-p coefficients")
        frob = getattr(self.ring, "frobenius", None)
        if frob is not None:
            return WittVector(self.ring, [frob(c) for c in self.coords])
        return WittVector(self.ring, [self.ring.pow(c, self.ring.p) for c in self.coords])

    def ghost(self):
        """Ghost components (W_0(A), ..., W_{n-1}(A)); oracle over torsion-free rings."""
        if self.ring.char_p:
            raise WittForgeError("ghost oracle is invalid over characteristic-p coefficients")
        ring, p = self.ring, self.ring.p
        out = []
        for k in range(len(self)):
            acc = ring.zero()
            for j in range(k + 1):
                term = ring.mul(ring.from_int(p ** j), ring.pow(self.coords[j], p ** (k - j)))
                acc = ring.add(acc, term)
            out.append(acc)
        return out


def teichmuller(ring, a, length) -> WittVector:
    return WittVector(ring, [a] + [ring.zero()] * (length - 1))


def minus_one_vector(ring, length) -> WittVector:
    """The Witt vector of -1: (-1,0,0,...) for p odd; (1,1,1,...) in char 2,
    (-1,-1,-1,...) over torsion-free rings at p=2."""
    if ring.p != 2:
        coords = [ring.from_int(-1)] + [ring.zero()] * (length - 1)
    elif ring.char_p:
        coords = [ring.one()] * length
    else:
        coords = [ring.from_int(-1)] * length
    return WittVector(ring, coords)


def int_multiple(ring, c, length, cache=None) -> WittVector:
    """Image of the integer c in the truncated Witt ring (repeated addition)."""
    zero = WittVector(ring, [ring.zero()] * length)
    if c == 0:
        return zero
    one = teichmuller(ring, ring.one(), length)
    acc = zero
    for _ in range(abs(c)):
        acc = acc.add(one, cache)
    if c < 0:
        acc = acc.neg(cache)
    return acc


def p_vector(ring, length, cache=None) -> WittVector:
    """p as a Witt vector.  Over char-p coefficients this is V(F(1)) = (0,1,0,...)."""
    if ring.char_p:
        coords = [ring.zero()] * length
        if length > 1:
            coords[1] = ring.one()
        return WittVector(ring, coords)
    return int_multiple(ring, ring.p, length, cache)
