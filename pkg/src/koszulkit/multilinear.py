"""Monomial and exterior bases and the Koszul differentials as sparse matrices.

Conventions (used everywhere in the package):

* ``V`` has basis ``v_0, ..., v_{n-1}`` (0-based in code).
* ``Sym^q V`` is indexed by nondecreasing index tuples of length ``q`` in
  lexicographic order, so for n=3, q=2 the order is
  ``v0^2, v0 v1, v0 v2, v1^2, v1 v2, v2^2``.
* ``wedge^d V`` is indexed by increasing tuples in lexicographic order.
* A tensor ``x (x) y`` of basis elements has index ``ix * dim(Y) + iy``.
* The dual spaces use the dual bases, so a subspace of ``wedge^2 V`` and its
  annihilator in ``wedge^2 V^*`` are written in the same coordinates.
"""

from __future__ import annotations

from bisect import insort
from dataclasses import dataclass, field as dc_field
from itertools import combinations, combinations_with_replacement
from math import comb
from typing import Any, Sequence

from .errors import AmbientMismatch
from .exactalg import Field, Matrix, SubspaceBasis


@dataclass(frozen=True)
class MonomialBasis:
    """Degree-``q`` monomials in ``n`` variables."""

    n: int
    q: int
    entries: tuple[tuple[int, ...], ...] = dc_field(repr=False)
    _index: dict[tuple[int, ...], int] = dc_field(repr=False, compare=False)

    @property
    def size(self) -> int:
        return len(self.entries)

    def exponent(self, i: int) -> tuple[int, ...]:
        """Exponent vector of the ``i``-th monomial."""
        e = [0] * self.n
        for v in self.entries[i]:
            e[v] += 1
        return tuple(e)

    def index_of(self, exponent: Sequence[int]) -> int:
        """Position of the monomial with the given exponent vector."""
        if len(exponent) != self.n or sum(exponent) != self.q or min(exponent, default=0) < 0:
            raise KeyError(tuple(exponent))
        key = tuple(v for v, e in enumerate(exponent) for _ in range(e))
        return self._index[key]

    def index_of_vars(self, variables: tuple[int, ...]) -> int:
        """Position of the monomial given as a sorted tuple of variable indices."""
        return self._index[variables]

    def __len__(self) -> int:
        return len(self.entries)


_SYM_CACHE: dict[tuple[int, int], MonomialBasis] = {}


def sym_basis(n: int, q: int) -> MonomialBasis:
    """Basis of ``Sym^q`` of an ``n``-dimensional space; size C(n+q-1, q)."""
    if n < 1 or q < 0:
        raise ValueError("sym_basis needs n >= 1 and q >= 0")
    key = (n, q)
    if key not in _SYM_CACHE:
        entries = tuple(combinations_with_replacement(range(n), q))
        _SYM_CACHE[key] = MonomialBasis(n, q, entries, {m: i for i, m in enumerate(entries)})
    return _SYM_CACHE[key]


@dataclass(frozen=True)
class ExteriorBasis:
    """Increasing index tuples of length ``d`` in lexicographic order."""

    n: int
    d: int
    entries: tuple[tuple[int, ...], ...] = dc_field(repr=False)
    _index: dict[tuple[int, ...], int] = dc_field(repr=False, compare=False)

    @property
    def size(self) -> int:
        return len(self.entries)

    def signed_index(self, idx: Sequence[int]) -> tuple[int, int]:
        """Return ``(sign, position)`` for a possibly unsorted tuple.

        The sign is the parity of the sorting permutation, and 0 when an
        index repeats (the wedge product vanishes).
        """
        t = list(idx)
        if len(set(t)) != len(t):
            return 0, -1
        sign = 1
        for i in range(len(t)):
            for j in range(len(t) - 1 - i):
                if t[j] > t[j + 1]:
                    t[j], t[j + 1] = t[j + 1], t[j]
                    sign = -sign
        return sign, self._index[tuple(t)]

    def index_of(self, idx: tuple[int, ...]) -> int:
        return self._index[idx]

    def __len__(self) -> int:
        return len(self.entries)


_EXT_CACHE: dict[tuple[int, int], ExteriorBasis] = {}


def exterior_basis(n: int, d: int) -> ExteriorBasis:
    key = (n, d)
    if key not in _EXT_CACHE:
        entries = tuple(combinations(range(n), d))
        _EXT_CACHE[key] = ExteriorBasis(n, d, entries, {t: i for i, t in enumerate(entries)})
    return _EXT_CACHE[key]


def _times(m: tuple[int, ...], i: int) -> tuple[int, ...]:
    t = list(m)
    insort(t, i)
    return tuple(t)


def wedge2(a: Sequence[Any], b: Sequence[Any], field: Field) -> list[Any]:
    """Coordinates of ``a ^ b`` in the lexicographic basis of wedge^2."""
    n = len(a)
    if len(b) != n:
        raise AmbientMismatch("wedge of vectors of different lengths")
    a = [field(x) for x in a]
    b = [field(x) for x in b]
    return [field(a[i] * b[j] - a[j] * b[i]) for i, j in exterior_basis(n, 2).entries]


def wedge2_span(vectors: Sequence[Sequence[Any]], field: Field) -> SubspaceBasis:
    """The subspace wedge^2 W for W spanned by ``vectors`` (assumed independent)."""
    n = len(vectors[0]) if vectors else 0
    amb = comb(n, 2)
    gens = [wedge2(vectors[s], vectors[t], field)
            for s in range(len(vectors)) for t in range(s + 1, len(vectors))]
    return SubspaceBasis.span(gens, amb, field) if gens else SubspaceBasis.zero(amb, field)


def quotient_projection(K: SubspaceBasis) -> list[list[Any]]:
    """Images of the wedge^2 basis vectors in wedge^2 V / K.

    The quotient is identified with the non-pivot coordinates of K's RREF
    basis.  Entry ``[col]`` is the image of the ``col``-th basis vector, as a
    list over the non-pivot coordinates.
    """
    f = K.field
    free = K.non_pivots()
    pos = {c: s for s, c in enumerate(free)}
    images: list[list[Any]] = [[f.zero] * len(free) for _ in range(K.ambient_dim)]
    for c in free:
        images[c][pos[c]] = f.one
    rows = K.rows()
    for r, pcol in enumerate(K.pivots):
        images[pcol] = [f.neg(rows[r][c]) for c in free]
    return images


def delta1_matrix(n: int, q: int, field: Field | None = None) -> Matrix:
    """Multiplication ``V (x) Sym^{q+1} -> Sym^{q+2}``."""
    field = field or Field.GF()
    src = sym_basis(n, q + 1)
    tgt = sym_basis(n, q + 2)
    cols = []
    for i in range(n):
        for m in src.entries:
            cols.append({tgt.index_of_vars(_times(m, i)): field.one})
    return Matrix(tgt.size, n * src.size, field, cols)


def _delta2_column(a: int, b: int, f: tuple[int, ...], tgt: MonomialBasis,
                   field: Field) -> dict[int, Any]:
    # (v_a ^ v_b) (x) f  ->  v_b (x) v_a f  -  v_a (x) v_b f
    s = tgt.size
    return {b * s + tgt.index_of_vars(_times(f, a)): field.one,
            a * s + tgt.index_of_vars(_times(f, b)): field.neg(field.one)}


def delta2_matrix(n: int, q: int, field: Field | None = None) -> Matrix:
    """Koszul differential ``wedge^2 V (x) Sym^q -> V (x) Sym^{q+1}``."""
    field = field or Field.GF()
    src = sym_basis(n, q)
    tgt = sym_basis(n, q + 1)
    cols = [_delta2_column(a, b, f, tgt, field)
            for a, b in exterior_basis(n, 2).entries for f in src.entries]
    return Matrix(n * tgt.size, len(cols), field, cols)


def delta2_restricted_matrix(n: int, q: int, K: SubspaceBasis) -> Matrix:
    """The restriction of the Koszul differential to ``K (x) Sym^q``.

    Columns are indexed by (basis vector of K, monomial).
    """
    _check_wedge2(n, K)
    field = K.field
    src = sym_basis(n, q)
    tgt = sym_basis(n, q + 1)
    s = tgt.size
    pairs = exterior_basis(n, 2).entries
    cols = []
    for row in K.rows():
        support = [(pairs[c], x) for c, x in enumerate(row) if x]
        for f in src.entries:
            col: dict[int, Any] = {}
            for (a, b), x in support:
                r1 = b * s + tgt.index_of_vars(_times(f, a))
                r2 = a * s + tgt.index_of_vars(_times(f, b))
                col[r1] = col.get(r1, 0) + x
                col[r2] = col.get(r2, 0) - x
            cols.append({r: field(v) for r, v in col.items() if field(v)})
    return Matrix(n * s, len(cols), field, cols)


def delta3_matrix(n: int, q: int, field: Field | None = None) -> Matrix:
    """Koszul differential ``wedge^3 V (x) Sym^{q-1} -> wedge^2 V (x) Sym^q``."""
    field = field or Field.GF()
    return delta3_tilde_matrix(n, q, SubspaceBasis.zero(comb(n, 2), field))


def delta3_tilde_matrix(n: int, q: int, K: SubspaceBasis) -> Matrix:
    """Induced map ``wedge^3 V (x) Sym^{q-1} -> (wedge^2 V / K) (x) Sym^q``.

    The quotient is realised on the non-pivot coordinates of K's RREF.
    """
    _check_wedge2(n, K)
    if q < 1:
        raise ValueError("delta3_tilde_matrix needs q >= 1")
    field = K.field
    proj = quotient_projection(K)
    c = len(K.non_pivots())
    src = sym_basis(n, q - 1)
    tgt = sym_basis(n, q)
    s = tgt.size
    ext2 = exterior_basis(n, 2)
    cols = []
    for i, j, k in exterior_basis(n, 3).entries:
        terms = (((i, j), k, 1), ((i, k), j, -1), ((j, k), i, 1))
        for f in src.entries:
            col: dict[int, Any] = {}
            for pair, var, sign in terms:
                g = tgt.index_of_vars(_times(f, var))
                for t, x in enumerate(proj[ext2.index_of(pair)]):
                    if x:
                        r = t * s + g
                        col[r] = col.get(r, 0) + sign * x
            cols.append({r: field(v) for r, v in col.items() if field(v)})
    return Matrix(c * s, len(cols), field, cols)


def d3_dual_matrix(n: int, q: int, Kperp: SubspaceBasis) -> Matrix:
    """Dual differential ``K^perp (x) Sym^q(V)^* -> wedge^3 V^* (x) Sym^{q-1}(V)^*``.

    ``(u ^ v) (x) f  ->  sum_i (u ^ v ^ e_i) (x) d f / d x_i``, with monomials
    as the basis of the dual symmetric powers.  Columns are indexed by
    (basis vector of K^perp, monomial).
    """
    _check_wedge2(n, Kperp)
    if q < 1:
        raise ValueError("d3_dual_matrix needs q >= 1")
    field = Kperp.field
    src = sym_basis(n, q)
    tgt = sym_basis(n, q - 1)
    s = tgt.size
    pairs = exterior_basis(n, 2).entries
    ext3 = exterior_basis(n, 3)
    # derivatives of each monomial: list of (variable, coefficient, index of quotient)
    derivs = []
    for m in src.entries:
        d = []
        for v in sorted(set(m)):
            rest = list(m)
            rest.remove(v)
            d.append((v, m.count(v), tgt.index_of_vars(tuple(rest))))
        derivs.append(d)
    cols = []
    for row in Kperp.rows():
        support = [(pairs[c], x) for c, x in enumerate(row) if x]
        for fi in range(src.size):
            col: dict[int, Any] = {}
            for (a, b), x in support:
                for v, mult, g in derivs[fi]:
                    sign, t = ext3.signed_index((a, b, v))
                    if sign:
                        r = t * s + g
                        col[r] = col.get(r, 0) + sign * mult * x
            cols.append({r: field(v) for r, v in col.items() if field(v)})
    return Matrix(ext3.size * s, len(cols), field, cols)


def _check_wedge2(n: int, sub: SubspaceBasis) -> None:
    if sub.ambient_dim != comb(n, 2):
        raise AmbientMismatch(
            f"subspace of ambient dim {sub.ambient_dim} is not in wedge^2 of a {n}-dim space")
