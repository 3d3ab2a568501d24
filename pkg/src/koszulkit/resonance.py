"""Resonance diagnostics: membership, isotropy and separability of components.

Vectors of ``V^*`` are length-n coordinate lists; ``K^perp`` lives in
``wedge^2 V^*`` with the lexicographic pair coordinates of
:mod:`koszulkit.multilinear`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from math import comb, isqrt
from pathlib import Path
from typing import Any, Sequence

from .errors import AmbientMismatch, MalformedInput, PreconditionViolated, RouteDisagreement
from .exactalg import Field, Matrix, SubspaceBasis, contains, intersect, rank
from .koszul import KoszulProblem, decomposition_formula, dim_Wq
from .multilinear import wedge2, wedge2_span


@dataclass(frozen=True)
class ResonanceComponent:
    """A linear subspace of ``V^*`` declared as a resonance component.

    ``isotropic`` and ``separable`` are None while unknown.
    """

    subspace: SubspaceBasis
    label: str = ""
    isotropic: bool | None = None
    separable: bool | None = None

    def __post_init__(self) -> None:
        if self.subspace.dim < 2:
            raise PreconditionViolated(
                f"component {self.label!r} has dim {self.subspace.dim}; need at least 2")

    @classmethod
    def span(cls, vectors: Sequence[Sequence[Any]], field: Field, label: str = "") -> ResonanceComponent:
        n = len(vectors[0]) if vectors else 0
        return cls(SubspaceBasis.span(vectors, n, field), label)

    @property
    def dim(self) -> int:
        return self.subspace.dim

    @property
    def n(self) -> int:
        return self.subspace.ambient_dim

    def with_flags(self, Kperp: SubspaceBasis) -> ResonanceComponent:
        iso = is_isotropic(self, Kperp)
        return replace(self, isotropic=iso, separable=is_separable(self, Kperp))

    @classmethod
    def from_json(cls, doc: dict, field: Field) -> ResonanceComponent:
        if not isinstance(doc, dict) or "basis" not in doc:
            raise MalformedInput("component JSON needs a 'basis' list")
        basis = doc["basis"]
        if not isinstance(basis, list) or not basis or any(not isinstance(v, list) for v in basis):
            raise MalformedInput("'basis' must be a non-empty list of coefficient lists")
        n = len(basis[0])
        if any(len(v) != n for v in basis):
            raise AmbientMismatch("component basis vectors of different lengths")
        sub = SubspaceBasis.span([[str(x) for x in v] for v in basis], n, field)
        return cls(sub, str(doc.get("label", "")))

    @classmethod
    def load(cls, path: str | Path, field: Field) -> ResonanceComponent:
        try:
            with open(path) as fh:
                doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise MalformedInput(f"{path}: {exc}") from exc
        return cls.from_json(doc, field)

    def to_json(self) -> dict:
        f = self.subspace.field
        return {"label": self.label,
                "basis": [[f.format(x) for x in row] for row in self.subspace.rows()]}


def _n_from_wedge2(amb: int) -> int:
    n = (1 + isqrt(1 + 8 * amb)) // 2
    if comb(n, 2) != amb:
        raise AmbientMismatch(f"{amb} is not a binomial C(n,2)")
    return n


def _check_component(c: ResonanceComponent, Kperp: SubspaceBasis) -> None:
    if comb(c.n, 2) != Kperp.ambient_dim:
        raise AmbientMismatch(
            f"component in dimension {c.n} does not match K^perp ambient {Kperp.ambient_dim}")
    if c.subspace.field != Kperp.field:
        raise AmbientMismatch("component and K^perp over different fields")


def in_resonance(a: Sequence[Any], Kperp: SubspaceBasis) -> bool:
    """True iff some b gives a nonzero ``a ^ b`` in K^perp (and for a = 0).

    The map ``b -> a ^ b`` taken modulo K^perp always kills ``a``; the
    vector is resonant exactly when the kernel has dimension at least 2.
    """
    f = Kperp.field
    n = _n_from_wedge2(Kperp.ambient_dim)
    if len(a) != n:
        raise AmbientMismatch(f"vector of length {len(a)} for n = {n}")
    a = [f(x) for x in a]
    if not any(a):
        return True
    K = Kperp.annihilator()
    if K.dim == 0:
        return n >= 2
    krows = K.rows()
    cols = []
    for j in range(n):
        e = [f.zero] * n
        e[j] = f.one
        w = wedge2(a, e, f)
        cols.append([f(sum(x * y for x, y in zip(w, k) if x and y)) for k in krows])
    L = Matrix.from_rows(list(map(list, zip(*cols))), f, ncols=n)
    return n - rank(L) >= 2


def is_isotropic(c: ResonanceComponent, Kperp: SubspaceBasis) -> bool:
    """True iff wedge^2 of the component lies in K^perp."""
    _check_component(c, Kperp)
    return contains(Kperp, wedge2_span(c.subspace.rows(), c.subspace.field))


def mixed_wedge(c: ResonanceComponent) -> SubspaceBasis:
    """The subspace (component) ^ V^* of wedge^2 V^*."""
    f = c.subspace.field
    n = c.n
    gens = []
    for row in c.subspace.rows():
        for j in range(n):
            e = [f.zero] * n
            e[j] = f.one
            gens.append(wedge2(row, e, f))
    return SubspaceBasis.span(gens, comb(n, 2), f)


def _mixed_intersection(c: ResonanceComponent, Kperp: SubspaceBasis) -> SubspaceBasis:
    return intersect(mixed_wedge(c), Kperp)


def is_separable(c: ResonanceComponent, Kperp: SubspaceBasis) -> bool:
    """True iff (component ^ V^*) meets K^perp only inside wedge^2(component)."""
    _check_component(c, Kperp)
    return contains(wedge2_span(c.subspace.rows(), c.subspace.field),
                    _mixed_intersection(c, Kperp))


def is_strongly_isotropic(c: ResonanceComponent, Kperp: SubspaceBasis) -> bool:
    """(component ^ V^*) meet K^perp == wedge^2(component), cross-checked
    against isotropy plus surjectivity of K onto the mixed block."""
    _check_component(c, Kperp)
    equal = _mixed_intersection(c, Kperp) == wedge2_span(c.subspace.rows(), c.subspace.field)
    if is_isotropic(c, Kperp):
        r, target = mixed_projection_rank(c, Kperp.annihilator())
        by_rank = r == target
    else:
        by_rank = False
    if equal != by_rank:
        raise RouteDisagreement(f"strong isotropy tests disagree on component {c.label!r}")
    return equal


def mixed_projection_rank(c: ResonanceComponent, K: SubspaceBasis) -> tuple[int, int]:
    """Rank of the projection of K onto the mixed block, and the block's dimension.

    The component's RREF basis f_1..f_k is completed to a basis of V^* by
    unit vectors on the non-pivot coordinates.  The mixed block has
    coordinates <f_s ^ f_t, .> with s <= k < t, so its dimension is k (n - k).
    """
    f = K.field
    n = c.n
    comp_rows = c.subspace.rows()
    k = len(comp_rows)
    extra = []
    for j in c.subspace.non_pivots():
        e = [f.zero] * n
        e[j] = f.one
        extra.append(e)
    if not extra:
        return 0, 0
    mixed = [wedge2(fs, ft, f) for fs in comp_rows for ft in extra]
    proj = [[f(sum(x * y for x, y in zip(m, kr) if x and y)) for m in mixed] for kr in K.rows()]
    r = rank(Matrix.from_rows(proj, f, ncols=len(mixed))) if proj else 0
    return r, k * (n - k)


def separability_via_pM(c: ResonanceComponent, K: SubspaceBasis) -> bool:
    """Separability as surjectivity of K onto the mixed block of wedge^2 V.

    Only meaningful for isotropic components, where it is equivalent to
    :func:`is_separable`.
    """
    Kperp = K.annihilator()
    _check_component(c, Kperp)
    if not is_isotropic(c, Kperp):
        raise PreconditionViolated(f"component {c.label!r} is not isotropic")
    r, target = mixed_projection_rank(c, K)
    return r == target


def require_strongly_isotropic(components: Sequence[ResonanceComponent],
                               Kperp: SubspaceBasis) -> None:
    bad = [c.label or f"#{i}" for i, c in enumerate(components)
           if not is_strongly_isotropic(c, Kperp)]
    if bad:
        raise PreconditionViolated(f"components not strongly isotropic: {', '.join(bad)}")


def decomposition_check(problem: KoszulProblem, components: Sequence[ResonanceComponent],
                        q: int) -> bool:
    """dim W_q(V, K) against the sum of free-module dims over the components."""
    if q < problem.n - 3:
        raise PreconditionViolated(f"q = {q} is below n - 3 = {problem.n - 3}")
    require_strongly_isotropic(components, problem.Kperp)
    return dim_Wq(problem, q) == decomposition_formula([c.dim for c in components], q)


def component_report(c: ResonanceComponent, problem: KoszulProblem) -> dict:
    """All flags for one component, as a JSON-ready dict."""
    kp = problem.Kperp
    iso = is_isotropic(c, kp)
    sep = is_separable(c, kp)
    out = {"label": c.label, "dim": c.dim, "isotropic": iso, "separable": sep,
           "separable_pM": separability_via_pM(c, problem.K) if iso else None,
           "strongly_isotropic": is_strongly_isotropic(c, kp)}
    return out
