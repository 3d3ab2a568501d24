"""Subspaces of F^N in canonical reduced row echelon form."""

from __future__ import annotations

from typing import Any, Iterable, Sequence

import numpy as np

from ..errors import AmbientMismatch, PreconditionViolated, RetriesExhausted
from .dense import Echelon, backend, rref
from .fields import Field
from .matrix import Matrix
from .prng import ResidueStream

RANDOM_RETRIES = 16


class SubspaceBasis:
    """A subspace of ``field**ambient_dim`` stored by its RREF basis.

    Two bases of the same subspace give equal objects, so equality is a
    direct comparison of the canonical rows.
    """

    __slots__ = ("ambient_dim", "field", "_rows", "pivots")

    def __init__(self, ambient_dim: int, field: Field, rows: np.ndarray,
                 pivots: Sequence[int]) -> None:
        # rows must already be canonical RREF; use span() otherwise
        self.ambient_dim = ambient_dim
        self.field = field
        rows = np.array(rows, dtype=backend(field).dtype).reshape(len(pivots), ambient_dim)
        rows.setflags(write=False)
        self._rows = rows
        self.pivots = tuple(int(p) for p in pivots)

    # construction -------------------------------------------------------
    @classmethod
    def span(cls, vectors: Iterable[Sequence[Any]] | np.ndarray, ambient_dim: int,
             field: Field) -> SubspaceBasis:
        """Span of the given vectors (scalars are coerced into ``field``)."""
        ar = backend(field)
        if isinstance(vectors, np.ndarray) and vectors.dtype == ar.dtype:
            arr = vectors.reshape(-1, ambient_dim)
            if ar.dtype != object:
                arr = ar.reduce(arr)
        else:
            vecs = [[field(x) for x in v] for v in vectors]
            for v in vecs:
                if len(v) != ambient_dim:
                    raise AmbientMismatch(f"vector of length {len(v)} in ambient {ambient_dim}")
            arr = ar.asarray(vecs) if vecs else ar.zeros((0, ambient_dim))
            arr = arr.reshape(-1, ambient_dim)
        if arr.shape[0] == 0:
            return cls.zero(ambient_dim, field)
        basis, piv = rref(arr, field)
        return cls(ambient_dim, field, basis, piv)

    @classmethod
    def zero(cls, ambient_dim: int, field: Field) -> SubspaceBasis:
        return cls(ambient_dim, field, backend(field).zeros((0, ambient_dim)), [])

    @classmethod
    def full(cls, ambient_dim: int, field: Field) -> SubspaceBasis:
        return cls(ambient_dim, field, backend(field).identity(ambient_dim),
                   range(ambient_dim))

    @classmethod
    def coordinate(cls, indices: Iterable[int], ambient_dim: int,
                   field: Field) -> SubspaceBasis:
        idx = sorted(set(indices))
        arr = backend(field).zeros((len(idx), ambient_dim))
        for r, i in enumerate(idx):
            arr[r, i] = field.one
        return cls(ambient_dim, field, arr, idx)

    # access ---------------------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self.pivots)

    @property
    def array(self) -> np.ndarray:
        """Read-only canonical basis array (backend representation)."""
        return self._rows

    def rows(self) -> list[list[Any]]:
        conv = backend(self.field).to_python
        return [[conv(x) for x in row] for row in self._rows]

    def matrix(self) -> Matrix:
        """Basis rows as a ``dim x ambient_dim`` Matrix."""
        return Matrix.from_rows(self.rows(), self.field, ncols=self.ambient_dim)

    def non_pivots(self) -> list[int]:
        piv = set(self.pivots)
        return [j for j in range(self.ambient_dim) if j not in piv]

    def _echelon(self) -> Echelon:
        e = Echelon(self.ambient_dim, self.field)
        if self.dim:
            e.basis = e.ar.asarray(self._rows)
            e.pivots = list(self.pivots)
        return e

    def reduce(self, vectors: Any) -> np.ndarray:
        """Residuals of vectors after reduction against this basis."""
        return self._echelon().reduce(vectors)

    def contains_vector(self, v: Sequence[Any]) -> bool:
        vec = [self.field(x) for x in v]
        if len(vec) != self.ambient_dim:
            raise AmbientMismatch("vector length differs from ambient dimension")
        return not np.any(self.reduce([vec]) != 0)

    def coordinates(self, v: Sequence[Any]) -> list[Any]:
        """Coefficients of ``v`` in this basis; raises if ``v`` is outside."""
        if not self.contains_vector(v):
            raise PreconditionViolated("vector is not in the subspace")
        vec = [self.field(x) for x in v]
        return [vec[p] for p in self.pivots]

    def annihilator(self) -> SubspaceBasis:
        """Orthogonal complement under the coordinate pairing sum(x_i y_i)."""
        n = self.ambient_dim
        free = self.non_pivots()
        ar = backend(self.field)
        ker = ar.zeros((len(free), n))
        for r, f in enumerate(free):
            ker[r, f] = self.field.one
        if self.dim and free:
            ker[:, list(self.pivots)] = ar.sub(ar.zeros((len(free), self.dim)),
                                               self._rows[:, free].T)
        return SubspaceBasis.span(ker, n, self.field) if free else SubspaceBasis.zero(n, self.field)

    # comparison -------------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SubspaceBasis):
            return NotImplemented
        return (self.ambient_dim == other.ambient_dim and self.field == other.field
                and self.pivots == other.pivots and np.array_equal(self._rows, other._rows))

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.field, self.pivots, self._rows.tobytes()
                     if self._rows.dtype != object else tuple(map(tuple, self._rows))))

    def __repr__(self) -> str:
        return f"SubspaceBasis(dim={self.dim}, ambient={self.ambient_dim}, {self.field})"


def _check(a: SubspaceBasis, b: SubspaceBasis) -> None:
    if a.ambient_dim != b.ambient_dim:
        raise AmbientMismatch(f"ambient dims {a.ambient_dim} and {b.ambient_dim}")
    if a.field != b.field:
        raise AmbientMismatch(f"fields {a.field} and {b.field}")


def contains(a: SubspaceBasis, b: SubspaceBasis) -> bool:
    """True iff ``b`` is a subspace of ``a``."""
    _check(a, b)
    if b.dim == 0:
        return True
    return not np.any(a.reduce(b.array) != 0)


def subspace_sum(a: SubspaceBasis, b: SubspaceBasis) -> SubspaceBasis:
    _check(a, b)
    if b.dim == 0:
        return a
    if a.dim == 0:
        return b
    return SubspaceBasis.span(np.concatenate([a.array, b.array]), a.ambient_dim, a.field)


def intersect(a: SubspaceBasis, b: SubspaceBasis) -> SubspaceBasis:
    """Intersection by the Zassenhaus stacking ``[a | a] / [b | 0]``."""
    _check(a, b)
    n = a.ambient_dim
    if a.dim == 0 or b.dim == 0:
        return SubspaceBasis.zero(n, a.field)
    ar = backend(a.field)
    top = np.concatenate([a.array, a.array], axis=1)
    bottom = np.concatenate([b.array, ar.zeros((b.dim, n))], axis=1)
    basis, piv = rref(np.concatenate([top, bottom]), a.field)
    keep = [r for r, p in enumerate(piv) if p >= n]
    if not keep:
        return SubspaceBasis.zero(n, a.field)
    return SubspaceBasis.span(basis[keep, n:], n, a.field)


def kernel_basis(m: Matrix) -> SubspaceBasis:
    """Right null space of ``m``."""
    n = m.ncols
    field = m.field
    if m.nrows == 0:
        return SubspaceBasis.full(n, field)
    basis, piv = rref(m.to_dense(), field)
    ar = backend(field)
    free = [j for j in range(n) if j not in set(piv)]
    if not free:
        return SubspaceBasis.zero(n, field)
    ker = ar.zeros((len(free), n))
    for r, f in enumerate(free):
        ker[r, f] = field.one
    if piv:
        ker[:, piv] = ar.sub(ar.zeros((len(free), len(piv))), basis[:, free].T)
    return SubspaceBasis.span(ker, n, field)


def random_subspace(ambient: int, dim: int, field: Field, seed: int) -> SubspaceBasis:
    """Uniformly random ``dim``-dimensional subspace of GF(p)**ambient.

    A ``dim x ambient`` matrix of residues is drawn from the seeded stream
    and row-reduced; rank-deficient draws are discarded and redrawn.
    """
    if field.p is None:
        raise PreconditionViolated("random subspaces are drawn over GF(p) only")
    if not 0 <= dim <= ambient:
        raise PreconditionViolated(f"cannot draw a {dim}-dim subspace of F^{ambient}")
    if dim == 0:
        return SubspaceBasis.zero(ambient, field)
    stream = ResidueStream(seed)
    for _ in range(RANDOM_RETRIES):
        draw = stream.residues(dim * ambient, field.p).reshape(dim, ambient)
        sub = SubspaceBasis.span(backend(field).asarray(draw), ambient, field)
        if sub.dim == dim:
            return sub
    raise RetriesExhausted(f"no rank-{dim} draw after {RANDOM_RETRIES} attempts")
