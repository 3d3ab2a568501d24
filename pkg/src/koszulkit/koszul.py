"""Hilbert functions of Koszul modules W(V, K).

For a subspace ``K`` of ``wedge^2 V`` the degree-q piece is

    W_q(V, K) = ker(V (x) Sym^{q+1} -> Sym^{q+2}) / image(K (x) Sym^q).

Three independent ways of computing ``dim W_q`` are implemented:

``delta2``
    dim W_q(V, 0) minus the rank of the Koszul differential restricted to
    ``K (x) Sym^q``.  The rank is taken after projecting onto coordinates
    that are independent on the kernel of multiplication.
``d3``
    Kernel dimension of the dual differential on ``K^perp (x) Sym^q(V)^*``
    (valid in characteristic 0 or p > q).
``presentation``
    Degree-by-degree recursion on the linear presentation of W:
    ``W_0 = wedge^2 V / K``, ``W_1 = V (x) W_0`` modulo the image of
    ``wedge^3 V``, and for ``q >= 1``

        W_{q+1} = V (x) W_q / span{x_i (x) x_j w - x_j (x) x_i w : w in W_{q-1}}.

    The systems stay small because they are sized by ``dim W_q`` rather
    than by ``dim Sym^q``; this is what makes n = 9 and n = 10 practical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from math import comb
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from .errors import AmbientMismatch, MalformedInput, PreconditionViolated, RouteDisagreement
from .exactalg import Echelon, Field, Matrix, SubspaceBasis, rank
from .exactalg.dense import backend
from .multilinear import (d3_dual_matrix, delta1_matrix, delta2_restricted_matrix,
                          exterior_basis, quotient_projection, sym_basis)

METHODS = ("auto", "delta2", "d3", "presentation")

# delta2 is used by "auto" while (rank-system rows x cols) stays below this
_DELTA2_BUDGET = 3_000_000


@dataclass(frozen=True)
class KoszulProblem:
    """A subspace ``K`` of ``wedge^2 V`` with ``dim V = n``."""

    n: int
    K: SubspaceBasis

    def __post_init__(self) -> None:
        if self.n < 1:
            raise MalformedInput("n must be at least 1")
        if self.K.ambient_dim != comb(self.n, 2):
            raise AmbientMismatch(
                f"K lives in dimension {self.K.ambient_dim}, expected C({self.n},2)")

    @property
    def field(self) -> Field:
        return self.K.field

    @property
    def m(self) -> int:
        return self.K.dim

    @cached_property
    def Kperp(self) -> SubspaceBasis:
        return self.K.annihilator()

    @classmethod
    def from_K(cls, n: int, vectors: Iterable[Sequence[Any]], field: Field) -> KoszulProblem:
        return cls(n, SubspaceBasis.span(list(vectors), comb(n, 2), field))

    @classmethod
    def from_Kperp(cls, n: int, vectors: Iterable[Sequence[Any]],
                   field: Field) -> KoszulProblem:
        return cls(n, SubspaceBasis.span(list(vectors), comb(n, 2), field).annihilator())

    @classmethod
    def zero(cls, n: int, field: Field) -> KoszulProblem:
        return cls(n, SubspaceBasis.zero(comb(n, 2), field))

    @classmethod
    def full(cls, n: int, field: Field) -> KoszulProblem:
        return cls(n, SubspaceBasis.full(comb(n, 2), field))

    # JSON ---------------------------------------------------------------
    @classmethod
    def from_json(cls, doc: dict, field: Field | None = None) -> KoszulProblem:
        """Parse the problem document; ``field`` overrides the file's field."""
        if not isinstance(doc, dict) or "n" not in doc:
            raise MalformedInput("problem JSON needs an object with key 'n'")
        keys = [k for k in ("K_basis", "K_perp_basis") if k in doc]
        if len(keys) != 1:
            raise MalformedInput("exactly one of 'K_basis' and 'K_perp_basis' is required")
        try:
            n = int(doc["n"])
        except (TypeError, ValueError) as exc:
            raise MalformedInput("'n' must be an integer") from exc
        if field is None:
            field = Field.parse(doc.get("field", "GF(32003)"))
        vecs = doc[keys[0]]
        if not isinstance(vecs, list) or any(not isinstance(v, list) for v in vecs):
            raise MalformedInput(f"'{keys[0]}' must be a list of coefficient lists")
        amb = comb(n, 2)
        for v in vecs:
            if len(v) != amb:
                raise AmbientMismatch(f"basis vector of length {len(v)}, expected C({n},2)={amb}")
        vecs = [[str(x) for x in v] for v in vecs]
        if keys[0] == "K_basis":
            return cls.from_K(n, vecs, field)
        return cls.from_Kperp(n, vecs, field)

    @classmethod
    def load(cls, path: str | Path, field: Field | None = None) -> KoszulProblem:
        try:
            with open(path) as fh:
                doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise MalformedInput(f"{path}: {exc}") from exc
        return cls.from_json(doc, field)

    def to_json(self) -> dict:
        f = self.field
        return {"n": self.n, "field": f.tag,
                "K_basis": [[f.format(x) for x in row] for row in self.K.rows()]}


@dataclass(frozen=True)
class HilbertTable:
    """Values of ``dim W_q`` on a contiguous range of degrees."""

    problem: KoszulProblem
    values: dict[int, int]
    method: str
    verified: bool = False

    def __post_init__(self) -> None:
        qs = sorted(self.values)
        if qs and qs != list(range(qs[0], qs[-1] + 1)):
            raise ValueError("HilbertTable degrees must be contiguous")
        if any(v < 0 for v in self.values.values()):
            raise ValueError("negative dimension")

    def __getitem__(self, q: int) -> int:
        return self.values[q]


@dataclass(frozen=True)
class NotStabilized:
    """Outcome of :func:`base_locus_length` when dims are not of the form l(q+1)."""

    d1: int
    d2: int


def dim_Wq_free(n: int, q: int) -> int:
    """Closed form of dim W_q(V, 0): (q+1) C(n+q, q+2)."""
    if n < 1 or q < 0:
        raise ValueError("dim_Wq_free needs n >= 1, q >= 0")
    return (q + 1) * comb(n + q, q + 2)


def dim_Wq_free_by_rank(n: int, q: int, field: Field | None = None) -> int:
    """dim W_q(V, 0) = dim ker(multiplication V (x) Sym^{q+1} -> Sym^{q+2})."""
    d1 = delta1_matrix(n, q, field or Field.GF())
    return d1.ncols - rank(d1)


def _free_dim(n: int, q: int, field: Field) -> int:
    # small n: recomputed by rank as a running check of the closed form
    if n >= 7:
        return dim_Wq_free(n, q)
    return dim_Wq_free_by_rank(n, q, field)


def delta2_projected_matrix(problem: KoszulProblem, q: int) -> Matrix:
    """Restricted Koszul differential with rows cut down to ``dim W_q(V,0)``.

    Row ``(i, m)`` of ``V (x) Sym^{q+1}`` is dropped when ``v_i`` is the
    smallest variable of ``v_i m``; those coordinates are determined on the
    kernel of multiplication by the remaining ones, so the projection is
    injective there and preserves the rank.
    """
    n = problem.n
    full = delta2_restricted_matrix(n, q, problem.K)
    tgt = sym_basis(n, q + 1)
    s = tgt.size
    keep: dict[int, int] = {}
    for i in range(n):
        for mi, mono in enumerate(tgt.entries):
            if i > mono[0]:
                keep[i * s + mi] = len(keep)
    cols = [{keep[r]: v for r, v in c.items() if r in keep} for c in full.columns()]
    return Matrix(len(keep), full.ncols, problem.field, cols)


def _dim_delta2(problem: KoszulProblem, q: int) -> int:
    free = _free_dim(problem.n, q, problem.field)
    if problem.m == 0:
        return free
    return free - rank(delta2_projected_matrix(problem, q))


def _dim_d3(problem: KoszulProblem, q: int) -> int:
    if q < 1:
        raise PreconditionViolated("the dual route needs q >= 1")
    p = problem.field.p
    if p is not None and p <= q:
        raise PreconditionViolated(f"the dual route needs characteristic 0 or > q (p={p})")
    kp = problem.Kperp
    if kp.dim == 0:
        return 0
    d3 = d3_dual_matrix(problem.n, q, kp)
    return d3.ncols - rank(d3)


def presentation_dims(problem: KoszulProblem, q_max: int) -> list[int]:
    """dim W_0, ..., dim W_{q_max} by the presentation recursion."""
    n, field = problem.n, problem.field
    ar = backend(field)
    c = comb(n, 2) - problem.m
    dims = [c]
    if q_max == 0 or c == 0:
        return (dims + [0] * q_max)[:q_max + 1]

    # W_0 = wedge^2 V / K; column t of proj0 is the image of the t-th basis vector
    images = quotient_projection(problem.K)
    proj0 = ar.asarray(images).T.reshape(c, comb(n, 2))
    ext2 = exterior_basis(n, 2)

    # W_1 = V (x) W_0 modulo the image of wedge^3 V; layout var * c + t
    ech = Echelon(n * c, field, chunk=1024)
    rel = []
    for i, j, k in exterior_basis(n, 3).entries:
        row = ar.zeros((n, c))
        row[k] = proj0[:, ext2.index_of((i, j))]
        row[j] = ar.sub(ar.zeros(c), proj0[:, ext2.index_of((i, k))])
        row[i] = proj0[:, ext2.index_of((j, k))]
        rel.append(row.reshape(-1))
        if len(rel) == 1024:
            ech.add(np.array(rel, dtype=ar.dtype))
            rel = []
    if rel:
        ech.add(np.array(rel, dtype=ar.dtype))
    proj = ech.quotient_projection()
    dims.append(proj.shape[0])
    mu_prev = [proj[:, i * c:(i + 1) * c] for i in range(n)]  # W_0 -> W_1

    for q in range(1, q_max):
        d_prev, d_cur = dims[q - 1], dims[q]
        if d_cur == 0:
            break
        ech = Echelon(n * d_cur, field, chunk=1024)
        for i in range(n):
            if ech.full:
                break
            for j in range(i + 1, n):
                block = ar.zeros((d_prev, n * d_cur))
                block[:, i * d_cur:(i + 1) * d_cur] = mu_prev[j].T
                block[:, j * d_cur:(j + 1) * d_cur] = ar.sub(ar.zeros((d_prev, d_cur)),
                                                             mu_prev[i].T)
                ech.add(block)
                if ech.full:
                    break
        proj = ech.quotient_projection()
        dims.append(proj.shape[0])
        mu_prev = [proj[:, i * d_cur:(i + 1) * d_cur] for i in range(n)]
    return (dims + [0] * (q_max + 1 - len(dims)))[:q_max + 1]


def _auto_method(problem: KoszulProblem, q: int) -> str:
    # the recursion is dense, so exact object arithmetic (QQ, large p) stays sparse
    if problem.m == 0 or q == 0 or backend(problem.field).dtype == object:
        return "delta2"
    cost = problem.m * comb(problem.n + q - 1, q) * dim_Wq_free(problem.n, q)
    return "delta2" if cost <= _DELTA2_BUDGET else "presentation"


def dim_Wq(problem: KoszulProblem, q: int, method: str = "auto", verify: bool = False) -> int:
    """dim W_q(V, K).

    ``method`` picks the route; with ``verify`` the value is recomputed by
    the dual route (for q >= 1) and a :class:`RouteDisagreement` is raised if
    the two differ.
    """
    if q < 0:
        raise PreconditionViolated("q must be non-negative")
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    if method == "auto":
        method = _auto_method(problem, q)
    if method == "delta2":
        value = _dim_delta2(problem, q)
    elif method == "d3":
        value = _dim_d3(problem, q)
    else:
        value = presentation_dims(problem, q)[q]
    if verify:
        _verify(problem, q, value, method)
    return value


def _verify(problem: KoszulProblem, q: int, value: int, method: str) -> None:
    if q == 0:
        other, other_method = comb(problem.n, 2) - problem.m, "closed form"
    elif method == "d3":
        other, other_method = _dim_delta2(problem, q), "delta2"
    else:
        other, other_method = _dim_d3(problem, q), "d3"
    if other != value:
        raise RouteDisagreement(
            f"dim W_{q}: {method} gives {value}, {other_method} gives {other}")


def hilbert_function(problem: KoszulProblem, q_max: int, q_min: int = 0,
                     method: str = "auto", verify: bool = False) -> HilbertTable:
    """Table of dim W_q for ``q_min <= q <= q_max``."""
    if q_max < q_min or q_min < 0:
        raise PreconditionViolated("need 0 <= q_min <= q_max")
    qs = range(q_min, q_max + 1)
    if method == "presentation" or (method == "auto" and any(
            _auto_method(problem, q) == "presentation" for q in qs)):
        dims = presentation_dims(problem, q_max)
        values = {q: dims[q] for q in qs}
        used = "presentation"
    else:
        values = {q: dim_Wq(problem, q, method) for q in qs}
        used = method if method != "auto" else "delta2"
    if verify:
        for q in qs:
            _verify(problem, q, values[q], used)
    return HilbertTable(problem, values, used, verified=verify)


def resonance_trivial(problem: KoszulProblem) -> bool:
    """True iff W_{n-3}(V, K) = 0, i.e. the resonance variety is {0}."""
    if problem.n < 3:
        raise PreconditionViolated("resonance_trivial needs n >= 3")
    return dim_Wq(problem, problem.n - 3) == 0


def base_locus_length(problem: KoszulProblem) -> int | NotStabilized:
    """Length l with dim W_q = l (q+1) in the stable range, read off at q = n-3, n-2."""
    n = problem.n
    if n < 3:
        raise PreconditionViolated("base_locus_length needs n >= 3")
    dims = hilbert_function(problem, n - 2, q_min=n - 3).values
    d1, d2 = dims[n - 3], dims[n - 2]
    if d1 * (n - 1) == d2 * (n - 2) and d1 % (n - 2) == 0:
        return d1 // (n - 2)
    return NotStabilized(d1, d2)


def catalan(k: int) -> int:
    if k < 0:
        raise ValueError("catalan needs k >= 0")
    return comb(2 * k, k) // (k + 1)


def decomposition_formula(component_dims: Iterable[int], q: int) -> int:
    """Sum over components of dim W_q of a free module on the component."""
    return sum(dim_Wq_free(d, q) for d in component_dims)


def regularity_upper_check(problem: KoszulProblem, components: Sequence) -> bool:
    """Hilbert-function shadow of the regularity bound n - 3.

    Requires strongly isotropic components and checks that dim W_q equals
    the component formula at q = n-3, n-2, n-1.
    """
    from .resonance import require_strongly_isotropic

    require_strongly_isotropic(components, problem.Kperp)
    n = problem.n
    q0 = max(n - 3, 0)
    table = hilbert_function(problem, n - 1, q_min=q0)
    dims = [c.dim for c in components]
    return all(table[q] == decomposition_formula(dims, q) for q in range(q0, n))
