"""Dense exact elimination on numpy arrays.

Over GF(p) with moderate ``p`` the arrays are float64: every product of two
residues is below 2**53, so BLAS matrix products are exact as long as the
inner dimension is bounded, and we reduce modulo ``p`` after each product.
For large primes and for QQ the arrays have object dtype holding Python
ints or Fractions.

The core is :class:`Echelon`, a reduced row echelon basis that absorbs
blocks of rows.  Each block is reduced against the current basis with one
matrix product, the residual is put in echelon form by recursive halving,
and the old basis is back-substituted with the new pivots.  Almost all work
is in matrix products.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any

import numpy as np

from .fields import Field

_EXACT = float(2**53)
_BASE_ROWS = 24


class _FloatModP:
    """GF(p) arithmetic on float64 arrays of symmetric residues.

    Entries are integers in roughly [-p/2, p/2]; the representative is not
    canonical, but zero is always exactly 0.0, which is all elimination needs.
    Use :meth:`to_python` or :meth:`canonical` to get values in [0, p).
    """

    dtype = np.float64

    def __init__(self, p: int) -> None:
        self.p = p
        self.fp = float(p)
        self.pinv = 1.0 / p
        half = (p + 1) // 2 + 1
        self.kmax = max(1, int((_EXACT - self.fp) // (half * half)) - 1)

    def asarray(self, data: Any) -> np.ndarray:
        if isinstance(data, np.ndarray) and data.dtype != object:
            return self.reduce(data.astype(np.float64))
        a = np.array(data, dtype=object)
        if a.size == 0:
            return np.zeros(a.shape)
        return self.reduce((a % self.p).astype(np.float64))

    def reduce(self, x: np.ndarray) -> np.ndarray:
        """Symmetric residue of an integral float array with |x| < 2**53."""
        q = np.multiply(x, self.pinv)
        np.rint(q, out=q)
        q *= self.fp
        np.subtract(x, q, out=q)
        return q

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.submul(None, a, b, negate=False)

    def submul(self, c: np.ndarray | None, a: np.ndarray, b: np.ndarray,
               negate: bool = True) -> np.ndarray:
        """Return ``c - a @ b`` (or ``a @ b`` when ``c`` is None), reduced."""
        k = a.shape[1]
        for s in range(0, max(k, 1), self.kmax):
            t = a[:, s:s + self.kmax] @ b[s:s + self.kmax]
            if c is None:
                c = t if not negate else -t
            elif negate:
                np.subtract(c, t, out=t)
                c = t
            else:
                c = c + t
            c = self.reduce(c)
        return c

    def sub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.reduce(a - b)

    def scale(self, row: np.ndarray, s: Any) -> np.ndarray:
        return self.reduce(row * float(s))

    def inv(self, x: Any) -> float:
        return float(pow(int(x) % self.p, -1, self.p))

    def zeros(self, shape: tuple[int, ...]) -> np.ndarray:
        return np.zeros(shape)

    def identity(self, n: int) -> np.ndarray:
        return np.eye(n)

    def canonical(self, x: np.ndarray) -> np.ndarray:
        r = x.copy()
        r[r < 0] += self.fp
        return r

    def to_python(self, x: Any) -> int:
        return int(x) % self.p


class _ObjectModP:
    """GF(p) arithmetic on object arrays of Python ints (any prime)."""

    dtype = object

    def __init__(self, p: int) -> None:
        self.p = p

    def asarray(self, data: Any) -> np.ndarray:
        a = np.array(data, dtype=object)
        return a % self.p if a.size else a

    def reduce(self, x: np.ndarray) -> np.ndarray:
        return x % self.p if x.size else x

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.shape[1] == 0:
            return self.zeros((a.shape[0], b.shape[1]))
        return (a @ b) % self.p

    def sub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return (a - b) % self.p

    def submul(self, c: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.sub(c, self.matmul(a, b))

    def canonical(self, x: np.ndarray) -> np.ndarray:
        return x

    def scale(self, row: np.ndarray, s: Any) -> np.ndarray:
        return (row * int(s)) % self.p

    def inv(self, x: Any) -> int:
        return pow(int(x), -1, self.p)

    def zeros(self, shape: tuple[int, ...]) -> np.ndarray:
        return np.zeros(shape, dtype=object)

    def identity(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64).astype(object)

    def to_python(self, x: Any) -> int:
        return int(x)


class _Rational:
    """QQ arithmetic on object arrays of Fractions."""

    dtype = object

    def asarray(self, data: Any) -> np.ndarray:
        a = np.array(data, dtype=object)
        if a.size:
            a = np.vectorize(Fraction, otypes=[object])(a)
        return a

    def reduce(self, x: np.ndarray) -> np.ndarray:
        return x

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.shape[1] == 0:
            return self.zeros((a.shape[0], b.shape[1]))
        return a @ b

    def sub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return a - b

    def submul(self, c: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return c - self.matmul(a, b)

    def canonical(self, x: np.ndarray) -> np.ndarray:
        return x

    def scale(self, row: np.ndarray, s: Any) -> np.ndarray:
        return row * s

    def inv(self, x: Any) -> Fraction:
        return 1 / Fraction(x)

    def zeros(self, shape: tuple[int, ...]) -> np.ndarray:
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out

    def identity(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = Fraction(1)
        return out

    def to_python(self, x: Any) -> Fraction:
        return Fraction(x)


_FLOAT_PRIME_LIMIT = 2**26


def backend(field: Field):
    """Arithmetic backend for dense arrays over ``field``."""
    if field.p is None:
        return _Rational()
    if field.p < _FLOAT_PRIME_LIMIT:
        return _FloatModP(field.p)
    return _ObjectModP(field.p)


def _nonzero_rows(a: np.ndarray) -> np.ndarray:
    if a.shape[0] == 0 or a.shape[1] == 0:
        return a[:0]
    return a[np.any(a != 0, axis=1)]


def _merge(r1: np.ndarray, p1: list[int], r2: np.ndarray, p2: list[int]):
    piv = p1 + p2
    order = np.argsort(piv, kind="stable")
    return np.concatenate([r1, r2])[order], [piv[i] for i in order]


def _rref_small(a: np.ndarray, ar) -> tuple[np.ndarray, list[int]]:
    piv: list[int] = []
    basis = ar.zeros((0, a.shape[1]))
    for r in a:
        if piv:
            r = ar.submul(r[None, :], r[None, piv], basis)[0]
        nz = np.flatnonzero(r)
        if nz.size == 0:
            continue
        j = int(nz[0])
        r = ar.scale(r, ar.inv(r[j]))
        if piv:
            basis = ar.submul(basis, basis[:, j:j + 1], r[None, :])
        basis = np.concatenate([basis, r[None, :]])
        piv.append(j)
    if not piv:
        return basis, []
    return _merge(basis, piv, basis[:0], [])


def _rref(a: np.ndarray, ar) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``a`` (rows already reduced mod p)."""
    a = _nonzero_rows(a)
    if a.shape[0] <= _BASE_ROWS:
        return _rref_small(a, ar)
    h = a.shape[0] // 2
    r1, p1 = _rref(a[:h], ar)
    b = a[h:]
    if p1:
        b = ar.submul(b, b[:, p1], r1)
    r2, p2 = _rref(b, ar)
    if not p2:
        return r1, p1
    if p1:
        r1 = ar.submul(r1, r1[:, p2], r2)
    return _merge(r1, p1, r2, p2)


class Echelon:
    """Incrementally maintained reduced row echelon basis of a row space.

    >>> e = Echelon(3, Field.GF(7))
    >>> e.add([[1, 2, 3], [2, 4, 6]])
    1
    >>> e.rank
    1
    """

    def __init__(self, ncols: int, field: Field, chunk: int = 512) -> None:
        self.ncols = ncols
        self.field = field
        self.ar = backend(field)
        self.chunk = chunk
        self.basis = self.ar.zeros((0, ncols))
        self.pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def full(self) -> bool:
        return self.rank == self.ncols

    def add(self, rows: Any) -> int:
        """Absorb ``rows`` (array-like, already in the field) and return the rank gain."""
        if not isinstance(rows, np.ndarray) or rows.dtype != self.ar.dtype:
            rows = self.ar.asarray(rows)
        rows = rows.reshape(-1, self.ncols)
        gained = 0
        for s in range(0, rows.shape[0], self.chunk):
            if self.full:
                break
            gained += self._add_block(rows[s:s + self.chunk])
        return gained

    def _add_block(self, c: np.ndarray) -> int:
        ar = self.ar
        if self.pivots:
            c = ar.submul(c, c[:, self.pivots], self.basis)
        r, p = _rref(c, ar)
        if not p:
            return 0
        if self.pivots:
            self.basis = ar.submul(self.basis, self.basis[:, p], r)
        self.basis, self.pivots = _merge(self.basis, self.pivots, r, p)
        return len(p)

    def reduce(self, rows: Any) -> np.ndarray:
        """Residuals of ``rows`` modulo the current row space."""
        ar = self.ar
        if not isinstance(rows, np.ndarray) or rows.dtype != ar.dtype:
            rows = ar.asarray(rows)
        rows = rows.reshape(-1, self.ncols)
        if not self.pivots:
            return rows.copy()
        return ar.submul(rows, rows[:, self.pivots], self.basis)

    def free_columns(self) -> list[int]:
        mask = np.ones(self.ncols, dtype=bool)
        mask[self.pivots] = False
        return [int(j) for j in np.flatnonzero(mask)]

    def quotient_projection(self) -> np.ndarray:
        """Matrix of the projection of the ambient space onto ambient/rowspace.

        The quotient is identified with the free (non-pivot) coordinates: the
        result has one row per free column, maps that unit vector to itself
        and sends the pivot unit vector of basis row ``r`` to minus the free
        part of row ``r``.
        """
        ar = self.ar
        free = self.free_columns()
        proj = ar.zeros((len(free), self.ncols))
        if free:
            proj[:, free] = ar.identity(len(free))
            if self.pivots:
                proj[:, self.pivots] = ar.sub(ar.zeros((len(free), len(self.pivots))),
                                              self.basis[:, free].T)
        return proj


def rref(a: Any, field: Field) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns of a dense array."""
    ar = backend(field)
    arr = ar.asarray(a)
    e = Echelon(arr.shape[1], field)
    e.add(arr)
    return ar.canonical(e.basis), list(e.pivots)


def dense_rank(a: Any, field: Field) -> int:
    """Rank of a dense array; eliminates along the shorter side."""
    ar = backend(field)
    arr = a if isinstance(a, np.ndarray) and a.dtype == object == ar.dtype else ar.asarray(a)
    if arr.ndim != 2 or arr.size == 0:
        return 0
    if arr.shape[1] > arr.shape[0]:
        arr = arr.T
    e = Echelon(arr.shape[1], field)
    e.add(np.ascontiguousarray(arr))
    return e.rank
