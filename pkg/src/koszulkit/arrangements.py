"""Hyperplane arrangements: rank-2 flats, Orlik-Solomon degree-2 data,
multinets, resonance components and Chen ranks.

Hyperplanes are indexed 0..n-1 in input order; ``e_H`` denotes the
coordinate vectors of ``V^* = F^n`` and ``v_H`` the dual basis of ``V``.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations
from math import comb
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

from .errors import FlatTooSmall, InvalidMultinet, MalformedInput, PreconditionViolated, QTooSmall
from .exactalg import Field, Matrix, SubspaceBasis, kernel_basis
from .koszul import KoszulProblem, dim_Wq
from .multilinear import exterior_basis
from .resonance import ResonanceComponent


class MultinetSpanMismatch(UserWarning):
    """A multinet passed validation but its component differs from the
    solution space of the defining equations; flagged for review."""


@dataclass(frozen=True)
class Arrangement:
    """Central arrangement given by rational normal vectors."""

    ambient_dim: int
    hyperplanes: tuple[tuple[Fraction, ...], ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.hyperplanes:
            raise PreconditionViolated("an arrangement needs at least one hyperplane")
        for h in self.hyperplanes:
            if len(h) != self.ambient_dim:
                raise MalformedInput(f"normal {h} does not have length {self.ambient_dim}")
            if not any(h):
                raise MalformedInput("zero normal vector")
        if self.labels and len(self.labels) != len(self.hyperplanes):
            raise MalformedInput("labels and hyperplanes differ in number")
        for i, j in combinations(range(self.n), 2):
            if _span_dim([self.hyperplanes[i], self.hyperplanes[j]]) < 2:
                raise MalformedInput(f"hyperplanes {i} and {j} are proportional")

    @property
    def n(self) -> int:
        return len(self.hyperplanes)

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else f"H{i + 1}"

    @classmethod
    def from_normals(cls, normals: Iterable[Sequence[Any]],
                     labels: Sequence[str] = ()) -> Arrangement:
        hs = tuple(tuple(Fraction(str(x)) if isinstance(x, str) else Fraction(x) for x in h)
                   for h in normals)
        if not hs:
            raise PreconditionViolated("an arrangement needs at least one hyperplane")
        return cls(len(hs[0]), hs, tuple(labels))

    @classmethod
    def from_json(cls, doc: dict) -> Arrangement:
        if not isinstance(doc, dict) or "hyperplanes" not in doc:
            raise MalformedInput("arrangement JSON needs 'hyperplanes'")
        try:
            hs = tuple(tuple(Fraction(str(x)) for x in h) for h in doc["hyperplanes"])
        except (ValueError, ZeroDivisionError, TypeError) as exc:
            raise MalformedInput(f"bad hyperplane coefficient: {exc}") from exc
        m = int(doc.get("ambient_dim", len(hs[0]) if hs else 0))
        labels = tuple(str(x) for x in doc.get("labels", []) or [])
        return cls(m, hs, labels)

    @classmethod
    def load(cls, path: str | Path) -> Arrangement:
        try:
            with open(path) as fh:
                doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise MalformedInput(f"{path}: {exc}") from exc
        return cls.from_json(doc)

    def to_json(self) -> dict:
        doc = {"ambient_dim": self.ambient_dim,
               "hyperplanes": [[str(x) for x in h] for h in self.hyperplanes]}
        if self.labels:
            doc["labels"] = list(self.labels)
        return doc


def _span_dim(vectors: Sequence[Sequence[Fraction]]) -> int:
    return SubspaceBasis.span(vectors, len(vectors[0]), Field.QQ()).dim


@dataclass(frozen=True, order=True)
class Flat2:
    """A rank-2 flat, recorded by the sorted indices of the hyperplanes containing it."""

    members: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.members)

    def __contains__(self, h: int) -> bool:
        return h in self.members


def l2_flats(a: Arrangement) -> list[Flat2]:
    """All rank-2 flats; every pair of hyperplanes lies in exactly one."""
    qq = Field.QQ()
    seen: set[tuple[int, int]] = set()
    flats = []
    for i, j in combinations(range(a.n), 2):
        if (i, j) in seen:
            continue
        plane = SubspaceBasis.span([a.hyperplanes[i], a.hyperplanes[j]], a.ambient_dim, qq)
        members = tuple(k for k in range(a.n) if plane.contains_vector(a.hyperplanes[k]))
        seen.update(combinations(members, 2))
        flats.append(Flat2(members))
    return sorted(flats)


def flat_of(flats: Sequence[Flat2], h1: int, h2: int) -> Flat2:
    for x in flats:
        if h1 in x and h2 in x:
            return x
    raise KeyError((h1, h2))


def os_kperp(a: Arrangement, field: Field | None = None,
             flats: Sequence[Flat2] | None = None) -> SubspaceBasis:
    """Degree-2 Orlik-Solomon relations as a subspace of wedge^2 V^*.

    A flat with sorted members x_1 < ... < x_r contributes
    (e_{x_a} - e_{x_r}) ^ (e_{x_b} - e_{x_r}) for a < b < r.
    """
    field = field or Field.GF()
    flats = l2_flats(a) if flats is None else flats
    ext = exterior_basis(a.n, 2)
    gens = []
    for x in flats:
        r = x.members[-1]
        for xa, xb in combinations(x.members[:-1], 2):
            v = [0] * ext.size
            v[ext.index_of((xa, xb))] += 1
            v[ext.index_of((xa, r))] -= 1
            v[ext.index_of((xb, r))] += 1
            gens.append(v)
    return SubspaceBasis.span(gens, ext.size, field) if gens else SubspaceBasis.zero(ext.size, field)


def os_k(a: Arrangement, field: Field | None = None,
         flats: Sequence[Flat2] | None = None) -> SubspaceBasis:
    """The subspace K of wedge^2 V with K^perp the Orlik-Solomon relations.

    A flat X contributes v_i ^ (sum of v_j over j in X) for every member i
    except the last.
    """
    field = field or Field.GF()
    flats = l2_flats(a) if flats is None else flats
    ext = exterior_basis(a.n, 2)
    gens = []
    for x in flats:
        for i in x.members[:-1]:
            v = [0] * ext.size
            for j in x.members:
                if j != i:
                    sign, pos = ext.signed_index((i, j))
                    v[pos] += sign
            gens.append(v)
    return SubspaceBasis.span(gens, ext.size, field) if gens else SubspaceBasis.zero(ext.size, field)


def arrangement_problem(a: Arrangement, field: Field | None = None) -> KoszulProblem:
    return KoszulProblem(a.n, os_k(a, field))


# multinets ---------------------------------------------------------------

@dataclass(frozen=True)
class Multinet:
    """A partition of a sub-arrangement into blocks, with multiplicities.

    ``base_locus`` may be given explicitly; when None it is taken to be the
    set of flats containing hyperplanes from two different blocks.
    """

    blocks: tuple[tuple[int, ...], ...]
    multiplicities: Mapping[int, int] = dc_field(default_factory=dict)
    base_locus: tuple[Flat2, ...] | None = None

    def mult(self, h: int) -> int:
        return int(self.multiplicities.get(h, 1))

    @property
    def k(self) -> int:
        return len(self.blocks)

    @property
    def support(self) -> set[int]:
        return {h for b in self.blocks for h in b}

    def block_of(self, h: int) -> int | None:
        for i, b in enumerate(self.blocks):
            if h in b:
                return i
        return None

    @classmethod
    def from_json(cls, doc: dict) -> Multinet:
        if not isinstance(doc, dict) or "blocks" not in doc:
            raise MalformedInput("multinet JSON needs 'blocks'")
        try:
            blocks = tuple(tuple(int(h) for h in b) for b in doc["blocks"])
            mults = {int(k): int(v) for k, v in (doc.get("multiplicities") or {}).items()}
            locus = doc.get("base_locus")
            locus = None if locus is None else tuple(
                Flat2(tuple(sorted(int(h) for h in x))) for x in locus)
        except (TypeError, ValueError, AttributeError) as exc:
            raise MalformedInput(f"bad multinet JSON: {exc}") from exc
        return cls(blocks, mults, locus)

    @classmethod
    def load(cls, path: str | Path) -> Multinet:
        try:
            with open(path) as fh:
                doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise MalformedInput(f"{path}: {exc}") from exc
        return cls.from_json(doc)


@dataclass
class ValidationReport:
    """Outcome of :func:`multinet_validate`; ``conditions`` maps a name to (passed, detail)."""

    conditions: dict[str, tuple[bool, str]]
    base_locus: list[Flat2]
    weight: int | None

    @property
    def valid(self) -> bool:
        return all(ok for ok, _ in self.conditions.values())

    def failures(self) -> list[str]:
        return [name for name, (ok, _) in self.conditions.items() if not ok]

    def to_json(self) -> dict:
        return {"valid": self.valid,
                "conditions": {k: {"pass": ok, "detail": d} for k, (ok, d) in self.conditions.items()},
                "base_locus": [list(x.members) for x in self.base_locus],
                "weight": self.weight}


def _cross_block_flats(flats: Sequence[Flat2], net: Multinet) -> list[Flat2]:
    out = []
    for x in flats:
        blocks = {net.block_of(h) for h in x.members} - {None}
        if len(blocks) >= 2:
            out.append(x)
    return out


def multinet_validate(a: Arrangement, net: Multinet) -> ValidationReport:
    """Check the defining conditions of a multinet on ``a``.

    Conditions: ``structure`` (disjoint non-empty blocks of valid indices,
    positive multiplicities), ``k_at_least_3``, ``equal_weights`` (1),
    ``cross_in_base_locus`` (2), ``balanced_base_locus`` (3) and
    ``connected_blocks`` (4).  Connectivity is decided on the rank-2
    lattice: two hyperplanes of a block are adjacent when their common flat
    is not in the base locus, which is what a generic plane section sees.
    """
    conds: dict[str, tuple[bool, str]] = {}
    seen: set[int] = set()
    problems = []
    for b in net.blocks:
        if not b:
            problems.append("empty block")
        for h in b:
            if not 0 <= h < a.n:
                problems.append(f"index {h} out of range")
            elif h in seen:
                problems.append(f"hyperplane {h} in two blocks")
            seen.add(h)
    for h, mval in net.multiplicities.items():
        if mval < 1:
            problems.append(f"multiplicity of {h} is {mval}")
        if h not in seen:
            problems.append(f"multiplicity given for {h} outside the blocks")
    conds["structure"] = (not problems, "; ".join(problems) or "ok")
    conds["k_at_least_3"] = (net.k >= 3, f"k = {net.k}")
    if problems:
        return ValidationReport(conds, [], None)

    flats = l2_flats(a)
    locus = list(net.base_locus) if net.base_locus is not None else _cross_block_flats(flats, net)
    locus_set = set(locus)
    unknown = [x for x in locus if x not in set(flats)]
    if unknown:
        conds["structure"] = (False, f"base locus entries that are not flats: {unknown}")
        return ValidationReport(conds, locus, None)

    weights = [sum(net.mult(h) for h in b) for b in net.blocks]
    conds["equal_weights"] = (len(set(weights)) == 1, f"block weights {weights}")

    bad_cross = []
    for i, j in combinations(range(net.k), 2):
        for h1 in net.blocks[i]:
            for h2 in net.blocks[j]:
                x = flat_of(flats, h1, h2)
                if x not in locus_set:
                    bad_cross.append((h1, h2))
    conds["cross_in_base_locus"] = (not bad_cross, f"{len(bad_cross)} pairs outside" if bad_cross else "ok")

    unbalanced = []
    for x in locus:
        counts = [sum(net.mult(h) for h in b if h in x) for b in net.blocks]
        if len(set(counts)) != 1:
            unbalanced.append((x.members, counts))
    conds["balanced_base_locus"] = (not unbalanced, str(unbalanced) if unbalanced else "ok")

    disconnected = []
    for i, b in enumerate(net.blocks):
        reached = {b[0]}
        frontier = [b[0]]
        while frontier:
            h = frontier.pop()
            for g in b:
                if g not in reached and flat_of(flats, h, g) not in locus_set:
                    reached.add(g)
                    frontier.append(g)
        if len(reached) != len(b):
            disconnected.append(i)
    conds["connected_blocks"] = (not disconnected,
                                 f"disconnected blocks {disconnected}" if disconnected else "ok")
    return ValidationReport(conds, locus, weights[0] if len(set(weights)) == 1 else None)


def multinet_equations_space(a: Arrangement, net: Multinet, locus: Sequence[Flat2],
                             field: Field) -> SubspaceBasis:
    """Solutions of: sum a_H = 0; sum over A_X of a_H = 0 for X in the base locus;
    a_H = 0 for H outside the multinet's support."""
    rows = [[1] * a.n]
    for x in locus:
        rows.append([1 if h in x else 0 for h in range(a.n)])
    for h in range(a.n):
        if h not in net.support:
            rows.append([1 if g == h else 0 for g in range(a.n)])
    return kernel_basis(Matrix.from_rows(rows, field, ncols=a.n))


def multinet_component(a: Arrangement, net: Multinet, field: Field | None = None,
                       label: str = "") -> ResonanceComponent:
    """The (k-1)-dimensional component spanned by u_i - u_1, u_i = sum m_H e_H over block i.

    The span is compared with the solution space of the multinet equations;
    a mismatch is reported with a :class:`MultinetSpanMismatch` warning.
    """
    field = field or Field.GF()
    report = multinet_validate(a, net)
    if not report.valid:
        raise InvalidMultinet(f"multinet fails: {', '.join(report.failures())}")
    u = []
    for b in net.blocks:
        v = [0] * a.n
        for h in b:
            v[h] = net.mult(h)
        u.append(v)
    gens = [[x - y for x, y in zip(ui, u[0])] for ui in u[1:]]
    sub = SubspaceBasis.span(gens, a.n, field)
    if sub != multinet_equations_space(a, net, report.base_locus, field):
        warnings.warn(f"multinet component {label!r} differs from its equation description",
                      MultinetSpanMismatch, stacklevel=2)
    return ResonanceComponent(sub, label or f"net{[list(map(lambda h: h + 1, b)) for b in net.blocks]}")


def multinet_equations_agree(a: Arrangement, net: Multinet, field: Field | None = None) -> bool:
    field = field or Field.GF()
    report = multinet_validate(a, net)
    if not report.valid:
        raise InvalidMultinet(f"multinet fails: {', '.join(report.failures())}")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", MultinetSpanMismatch)
        comp = multinet_component(a, net, field)
    return comp.subspace == multinet_equations_space(a, net, report.base_locus, field)


def local_component(a: Arrangement, x: Flat2, field: Field | None = None) -> ResonanceComponent:
    """Component of a flat on at least 3 hyperplanes: vectors supported on the
    flat with coordinate sum 0; dimension |X| - 1."""
    field = field or Field.GF()
    if x.size < 3:
        raise FlatTooSmall(f"flat {x.members} has only {x.size} hyperplanes")
    rows = [[1 if h in x else 0 for h in range(a.n)]]
    rows += [[1 if g == h else 0 for g in range(a.n)] for h in range(a.n) if h not in x]
    sub = kernel_basis(Matrix.from_rows(rows, field, ncols=a.n))
    return ResonanceComponent(sub, "local{" + ",".join(str(h + 1) for h in x.members) + "}")


def local_components(a: Arrangement, field: Field | None = None) -> list[ResonanceComponent]:
    return [local_component(a, x, field) for x in l2_flats(a) if x.size >= 3]


# graphs ------------------------------------------------------------------

@dataclass(frozen=True)
class Graph:
    """Simple graph on vertices 0..m-1; edges keep input order, each as (u, v) with u < v."""

    m: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise MalformedInput(f"loop at vertex {u + 1}")
            if not (0 <= u < self.m and 0 <= v < self.m):
                raise MalformedInput(f"edge ({u + 1}, {v + 1}) outside {self.m} vertices")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise MalformedInput(f"repeated edge ({key[0] + 1}, {key[1] + 1})")
            seen.add(key)
        object.__setattr__(self, "edges", tuple((min(u, v), max(u, v)) for u, v in self.edges))

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int]], m: int | None = None,
                   one_indexed: bool = True) -> Graph:
        shift = 1 if one_indexed else 0
        es = [(int(u) - shift, int(v) - shift) for u, v in edges]
        if m is None:
            m = max((max(e) for e in es), default=-1) + 1
        return cls(m, tuple(es))

    @classmethod
    def parse(cls, text: str) -> Graph:
        """Whitespace-separated ``u v`` lines, 1-indexed; '#' starts a comment."""
        edges = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise MalformedInput(f"line {lineno}: expected 'u v'")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError as exc:
                raise MalformedInput(f"line {lineno}: non-integer vertex") from exc
            if u < 1 or v < 1:
                raise MalformedInput(f"line {lineno}: vertices are 1-indexed")
            edges.append((u, v))
        return cls.from_edges(edges)

    @classmethod
    def load(cls, path: str | Path) -> Graph:
        return cls.parse(Path(path).read_text())

    def adjacency(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.m)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def cliques(self, r: int) -> list[tuple[int, ...]]:
        """All r-cliques as increasing vertex tuples."""
        adj = self.adjacency()
        return [c for c in combinations(range(self.m), r)
                if all(b in adj[a] for a, b in combinations(c, 2))]

    def kappa(self, r: int) -> int:
        if r == 2:
            return len(self.edges)
        return len(self.cliques(r))


def complete_graph(m: int) -> Graph:
    return Graph(m, tuple(combinations(range(m), 2)))


def cycle_graph(m: int) -> Graph:
    return Graph(m, tuple((i, (i + 1) % m) for i in range(m)))


def wheel_graph(k: int) -> Graph:
    """A hub (vertex k+1) joined to every vertex of a k-cycle."""
    rim = [(i, (i + 1) % k) for i in range(k)]
    return Graph(k + 1, tuple(rim + [(i, k) for i in range(k)]))


def graphic_arrangement(g: Graph) -> Arrangement:
    """Hyperplanes z_u - z_v = 0, one per edge, in edge order."""
    if not g.edges:
        raise PreconditionViolated("edgeless graph gives an empty arrangement")
    normals = []
    for u, v in g.edges:
        h = [0] * g.m
        h[u], h[v] = 1, -1
        normals.append(h)
    return Arrangement.from_normals(normals, [f"z{u + 1}-z{v + 1}" for u, v in g.edges])


def graphic_components(g: Graph, field: Field | None = None) -> list[ResonanceComponent]:
    """One component per triangle and one per 4-clique, over the edge coordinates."""
    field = field or Field.GF()
    idx = {e: i for i, e in enumerate(g.edges)}
    n = len(g.edges)

    def vec(terms: Iterable[tuple[tuple[int, int], int]]) -> list[int]:
        v = [0] * n
        for e, s in terms:
            v[idx[e]] += s
        return v

    comps = []
    for i, j, k in g.cliques(3):
        basis = [vec([((i, j), 1), ((i, k), -1)]), vec([((i, j), 1), ((j, k), -1)])]
        comps.append(ResonanceComponent(SubspaceBasis.span(basis, n, field),
                                        f"P{i + 1}{j + 1}{k + 1}"))
    for i, j, k, l in g.cliques(4):
        basis = [vec([((i, j), 1), ((i, k), -1), ((k, l), 1), ((j, l), -1)]),
                 vec([((i, j), 1), ((j, k), -1), ((k, l), 1), ((i, l), -1)])]
        comps.append(ResonanceComponent(SubspaceBasis.span(basis, n, field),
                                        f"P{i + 1}{j + 1}{k + 1}{l + 1}"))
    return comps


def clique_multinet(g: Graph, clique: tuple[int, int, int, int]) -> Multinet:
    """The (3,2)-net on the six edges of a 4-clique: pairs of disjoint edges."""
    i, j, k, l = clique
    idx = {e: t for t, e in enumerate(g.edges)}
    return Multinet(((idx[(i, j)], idx[(k, l)]), (idx[(i, k)], idx[(j, l)]),
                     (idx[(i, l)], idx[(j, k)])))


# Chen ranks ----------------------------------------------------------------

def chen_free(m: int, q: int) -> int:
    """Chen ranks of the free group of rank m: (q-1) C(m+q-2, q)."""
    if q < 2:
        raise PreconditionViolated("Chen ranks are indexed from q = 2")
    if m < 1:
        raise PreconditionViolated("free group rank must be positive")
    return (q - 1) * comb(m + q - 2, q)


def chen_ranks_formula(components: Iterable[ResonanceComponent | int], q: int) -> int:
    """(q-1) * sum over component dims m of C(m+q-2, q)."""
    dims = [c if isinstance(c, int) else c.dim for c in components]
    if q < 2:
        raise PreconditionViolated("Chen ranks are indexed from q = 2")
    return (q - 1) * sum(comb(m + q - 2, q) for m in dims)


def chen_ranks_koszul(a: Arrangement, q: int, field: Field | None = None) -> int:
    """dim W_{q-2} of the arrangement's Koszul problem."""
    if q < 2:
        raise PreconditionViolated("Chen ranks are indexed from q = 2")
    return dim_Wq(arrangement_problem(a, field), q - 2)


def graphic_chen(g: Graph, q: int) -> int:
    """(q-1)(kappa_3 + kappa_4), valid from q = kappa_2 - 1 on."""
    if q < max(g.kappa(2) - 1, 2):
        raise QTooSmall(f"q = {q} is below kappa_2 - 1 = {g.kappa(2) - 1}")
    return (q - 1) * (g.kappa(3) + g.kappa(4))
