from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import koszulkit.resonance as resonance
import oracles
from koszulkit.arrangements import (Arrangement, complete_graph, graphic_arrangement,
                                    graphic_components, local_components, arrangement_problem)
from koszulkit.errors import AmbientMismatch, MalformedInput, PreconditionViolated, RouteDisagreement
from koszulkit.exactalg import Field, SubspaceBasis
from koszulkit.koszul import KoszulProblem
from koszulkit.resonance import (ResonanceComponent, component_report, decomposition_check,
                                 in_resonance, is_isotropic, is_separable, is_strongly_isotropic,
                                 mixed_projection_rank, mixed_wedge, separability_via_pM)

QQ = Field.QQ()
GF = Field.GF()


def w2(n, terms):
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    v = [0] * len(pairs)
    for (a, b), c in terms:
        v[pairs.index((a, b))] = c
    return v


def unit_span(n, idx, field=QQ, label=""):
    return ResonanceComponent.span([[1 if j == i else 0 for j in range(n)] for i in idx],
                                   field, label)


N4_KPERP = [w2(4, [((1, 2), 1)]), w2(4, [((1, 3), 1), ((2, 4), 1)])]
N6_KPERP = [w2(6, [((1, 2), 1)]), w2(6, [((1, 3), 1)]), w2(6, [((2, 3), 1)]),
            w2(6, [((1, 4), 1), ((2, 5), 1), ((3, 6), 1)])]


def n6_problem(field=QQ):
    return KoszulProblem.from_Kperp(6, N6_KPERP, field)


# oracle for the flags: ranks only -----------------------------------------------

def oracle_flags(kperp_rows, comp_rows):
    n = len(comp_rows[0])
    wedge_c = [oracles.wedge(a, b) for i, a in enumerate(comp_rows) for b in comp_rows[i + 1:]]
    mixed = [oracles.wedge(a, [1 if j == t else 0 for j in range(n)])
             for a in comp_rows for t in range(n)]
    r = oracles.rank
    iso = r(kperp_rows + wedge_c) == r(kperp_rows)

    def meet_dim(a, b):
        return r(a) + r(b) - r(a + b)
    # wedge^2(c) sits inside (c ^ V), so containment of the meet is a dimension count
    sep = meet_dim(mixed, kperp_rows) == meet_dim(wedge_c, kperp_rows)
    return iso, sep


# the two worked examples ---------------------------------------------------------

def test_n6_non_separable_component():
    p = n6_problem()
    c = unit_span(6, [0, 1, 2], label="e123")
    assert p.m == 11
    assert is_isotropic(c, p.Kperp) is True
    assert is_separable(c, p.Kperp) is False
    assert is_strongly_isotropic(c, p.Kperp) is False
    assert mixed_projection_rank(c, p.K) == (8, 9)
    assert separability_via_pM(c, p.K) is False
    assert oracle_flags(N6_KPERP, [[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0]]) == (True, False)


def test_n4_component_isotropic_not_separable():
    p = KoszulProblem.from_Kperp(4, N4_KPERP, QQ)
    c = unit_span(4, [0, 1])
    assert is_isotropic(c, p.Kperp) and not is_separable(c, p.Kperp)
    assert oracle_flags(N4_KPERP, [[1, 0, 0, 0], [0, 1, 0, 0]]) == (True, False)
    with pytest.raises(PreconditionViolated):
        decomposition_check(p, [c], 1)


def test_pM_route_requires_isotropy():
    p = n6_problem()
    c = unit_span(6, [3, 4])
    assert not is_isotropic(c, p.Kperp)
    with pytest.raises(PreconditionViolated):
        separability_via_pM(c, p.K)


# K4 braid -------------------------------------------------------------------------

@pytest.fixture(scope="module")
def k4():
    g = complete_graph(4)
    a = graphic_arrangement(g)
    return a, arrangement_problem(a, GF), graphic_components(g, GF)


def test_k4_components_strongly_isotropic_by_both_criteria(k4):
    a, p, comps = k4
    assert len(comps) == 5
    for c in comps:
        assert is_strongly_isotropic(c, p.Kperp)
        assert is_isotropic(c, p.Kperp) and separability_via_pM(c, p.K)
        rep = component_report(c, p)
        assert rep["strongly_isotropic"] and rep["separable_pM"]


@pytest.mark.parametrize("q", [3, 4, 5])
def test_k4_decomposition(k4, q):
    _, p, comps = k4
    assert decomposition_check(p, comps, q)


def test_decomposition_degree_precondition(k4):
    _, p, comps = k4
    with pytest.raises(PreconditionViolated):
        decomposition_check(p, comps, 2)


# strong isotropy consistency ----------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(st.integers(4, 6), st.data())
def test_flags_match_oracle_on_random_instances(n, data):
    k = data.draw(st.integers(2, n - 1))
    comp = data.draw(st.lists(st.lists(st.integers(-2, 2), min_size=n, max_size=n),
                              min_size=k, max_size=k))
    if oracles.rank(comp) < 2:
        return
    comp = [list(map(int, r)) for r in SubspaceBasis.span(comp, n, QQ).rows()]
    # K^perp: wedge^2 of the component (sometimes) plus a few random forms
    extra = data.draw(st.lists(st.lists(st.integers(-1, 1), min_size=comb(n, 2), max_size=comb(n, 2)),
                               max_size=3))
    rows = list(extra)
    if data.draw(st.booleans()):
        rows += [oracles.wedge(a, b) for i, a in enumerate(comp) for b in comp[i + 1:]]
    if not rows or oracles.rank(rows) == 0:
        rows = [oracles.wedge(comp[0], comp[1])]
    p = KoszulProblem.from_Kperp(n, rows, QQ)
    c = ResonanceComponent.span(comp, QQ)
    iso, sep = oracle_flags(rows, comp)
    assert is_isotropic(c, p.Kperp) == iso
    assert is_separable(c, p.Kperp) == sep
    assert is_strongly_isotropic(c, p.Kperp) == (iso and sep)
    if iso:
        assert separability_via_pM(c, p.K) == sep


def test_injected_route_disagreement(monkeypatch):
    p = n6_problem()
    c = unit_span(6, [0, 1, 2])
    monkeypatch.setattr(resonance, "_mixed_intersection",
                        lambda comp, kp: resonance.wedge2_span(comp.subspace.rows(), QQ))
    with pytest.raises(RouteDisagreement):
        is_strongly_isotropic(c, p.Kperp)


# membership --------------------------------------------------------------------

def test_in_resonance_against_bruteforce_gf3():
    p = KoszulProblem.from_Kperp(4, N4_KPERP, Field.GF(3))
    for a in ([1, 0, 0, 0], [0, 1, 0, 0], [1, 1, 0, 0], [0, 0, 1, 0], [1, 0, 1, 0],
              [0, 0, 0, 0], [2, 1, 1, 1], [0, 1, 0, 1]):
        assert in_resonance(a, p.Kperp) == oracles.resonant_bruteforce(a, N4_KPERP, 3), a


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=6, max_size=6),
       st.sampled_from([-3, -2, -1, 2, 5, "1/2", "-7/3"]))
def test_in_resonance_scaling_invariant(a, scale):
    p = n6_problem()
    scaled = [QQ(x) * QQ(scale) for x in a]
    assert in_resonance(a, p.Kperp) == in_resonance(scaled, p.Kperp)


def test_in_resonance_edge_cases():
    p = n6_problem()
    assert in_resonance([0] * 6, p.Kperp)
    with pytest.raises(AmbientMismatch):
        in_resonance([1, 0], p.Kperp)
    full = KoszulProblem.zero(4, QQ)  # K = 0, K^perp everything
    assert in_resonance([1, 2, 3, 4], full.Kperp)


def _corpus_arrangements():
    pencil = Arrangement.from_normals([[1, 0], [0, 1], [1, 1], [1, 2]])
    return {"K4": graphic_arrangement(complete_graph(4)), "pencil4": pencil,
            "K3": graphic_arrangement(complete_graph(3))}


@pytest.mark.parametrize("name", ["K4", "pencil4", "K3"])
def test_resonance_is_union_of_components(name):
    a = _corpus_arrangements()[name]
    p = arrangement_problem(a, QQ)
    if name == "K4":
        comps = graphic_components(complete_graph(4), QQ)
    else:
        comps = local_components(a, QQ)
    # every vector in a component is resonant
    for c in comps:
        rows = c.subspace.rows()
        for coeffs in ([1, 0], [0, 1], [2, -3], [1, 1]):
            v = [sum(QQ(x) * r[j] for x, r in zip(coeffs, rows)) for j in range(a.n)]
            if any(v):
                assert in_resonance(v, p.Kperp)
    # random small-integer vectors outside all components are not
    import random
    rng = random.Random(name)
    tested = 0
    while tested < 100:
        v = [rng.randint(-3, 3) for _ in range(a.n)]
        if not any(v) or any(c.subspace.contains_vector(v) for c in comps):
            continue
        assert not in_resonance(v, p.Kperp), v
        tested += 1


# component objects --------------------------------------------------------------

def test_component_validation_and_json(tmp_path):
    with pytest.raises(PreconditionViolated):
        unit_span(4, [0])
    c = unit_span(4, [0, 1], label="c")
    doc = c.to_json()
    assert doc == {"label": "c", "basis": [["1", "0", "0", "0"], ["0", "1", "0", "0"]]}
    assert ResonanceComponent.from_json(doc, QQ).subspace == c.subspace
    with pytest.raises(MalformedInput):
        ResonanceComponent.from_json({"label": "x"}, QQ)
    with pytest.raises(AmbientMismatch):
        ResonanceComponent.from_json({"basis": [["1", "0"], ["0", "1", "0"]]}, QQ)
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(MalformedInput):
        ResonanceComponent.load(bad, QQ)
    p = n6_problem()
    with pytest.raises(AmbientMismatch):
        is_isotropic(c, p.Kperp)


def test_with_flags_and_mixed_wedge():
    p = n6_problem()
    c = unit_span(6, [0, 1, 2]).with_flags(p.Kperp)
    assert (c.isotropic, c.separable) == (True, False)
    # dim(c ^ V) = C(k,2) + k(n-k)
    assert mixed_wedge(c).dim == 3 + 3 * 3
