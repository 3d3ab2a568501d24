from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from koszulkit.errors import AmbientMismatch
from koszulkit.exactalg import Field, Matrix, SubspaceBasis, random_subspace, rank
from koszulkit.multilinear import (d3_dual_matrix, delta1_matrix, delta2_matrix,
                                   delta2_restricted_matrix, delta3_matrix, delta3_tilde_matrix,
                                   exterior_basis, quotient_projection, sym_basis, wedge2,
                                   wedge2_span)

GF = Field.GF()
QQ = Field.QQ()


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 6), st.integers(0, 5))
def test_monomial_index_is_a_bijection(n, q):
    b = sym_basis(n, q)
    assert b.size == len(b) == comb(n + q - 1, q)
    seen = set()
    for i in range(b.size):
        e = b.exponent(i)
        assert sum(e) == q and len(e) == n
        assert b.index_of(e) == i
        assert b.index_of_vars(b.entries[i]) == i
        seen.add(e)
    assert len(seen) == b.size
    assert list(b.entries) == sorted(b.entries)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 7), st.integers(1, 4))
def test_exterior_index_bijection_and_signs(n, d):
    if d > n:
        return
    e = exterior_basis(n, d)
    assert e.size == comb(n, d)
    for i, t in enumerate(e.entries):
        assert e.index_of(t) == i
        assert e.signed_index(t) == (1, i)
        if d >= 2:
            swapped = (t[1], t[0]) + t[2:]
            assert e.signed_index(swapped) == (-1, i)
            assert e.signed_index((t[0], t[0]) + t[2:])[0] == 0


def test_wedge2_is_antisymmetric_and_bilinear():
    a, b, c = [1, 2, 0, 3], [0, 1, 5, 1], [2, 0, 1, 1]
    ab = wedge2(a, b, QQ)
    assert [-x for x in ab] == wedge2(b, a, QQ)
    assert not any(wedge2(a, a, QQ))
    assert wedge2(a, [x + y for x, y in zip(b, c)], QQ) == [
        x + y for x, y in zip(ab, wedge2(a, c, QQ))]
    assert ab == [QQ(x) for x in oracles.wedge(a, b)]
    with pytest.raises(AmbientMismatch):
        wedge2([1, 2], [1, 2, 3], QQ)


def test_wedge2_span_dimension():
    w = wedge2_span([[1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, 0, 1, 1, 0]], QQ)
    assert w.dim == 3 and w.ambient_dim == 10


def test_quotient_projection_kills_K():
    K = random_subspace(10, 4, GF, seed=3)
    images = quotient_projection(K)
    for row in K.rows():
        img = [sum(x * images[c][t] for c, x in enumerate(row)) % GF.p
               for t in range(10 - 4)]
        assert not any(img)


@pytest.mark.parametrize("n", range(2, 7))
def test_consecutive_differentials_compose_to_zero(n):
    for q in range(0, 6):
        d1 = delta1_matrix(n, q, GF)
        d2 = delta2_matrix(n, q, GF)
        assert (d1 @ d2).is_zero()
        if q >= 1 and n >= 3:
            d3 = delta3_matrix(n, q, GF)
            assert (delta2_matrix(n, q, GF) @ d3).nrows == n * sym_basis(n, q + 1).size
            # wedge^3 (x) S_{q-1} -> wedge^2 (x) S_q -> V (x) S_{q+1}
            assert (d2 @ d3).is_zero()


@pytest.mark.parametrize("n", range(2, 6))
def test_koszul_complex_exact_in_the_middle(n):
    # full K: image of delta2 equals the kernel of delta1
    for q in range(0, 4):
        d1, d2 = delta1_matrix(n, q, GF), delta2_matrix(n, q, GF)
        assert d1.ncols - rank(d1) == rank(d2) == oracles.free_dim(n, q)


def test_differentials_match_oracle_small():
    # W_q from the package matrices equals the oracle built from scratch
    for n in (3, 4):
        K = random_subspace(comb(n, 2), 2, Field.GF(101), seed=n)
        for q in range(0, 3):
            d1 = delta1_matrix(n, q, Field.GF(101))
            d2 = delta2_restricted_matrix(n, q, K)
            ours = d1.ncols - rank(d1) - rank(d2)
            assert ours == oracles.koszul_dim(n, q, K.rows(), 101)


REGRESSION = [(n, q) for n in range(2, 7) for q in range(0, 5)]


@pytest.mark.parametrize("n,q", REGRESSION)
def test_gf_and_qq_ranks_agree_on_regression_matrices(n, q):
    mats = [delta1_matrix, delta2_matrix]
    if q >= 1 and n >= 3:
        mats.append(delta3_matrix)
    for build in mats:
        gf, qq = build(n, q, GF), build(n, q, QQ)
        assert rank(gf) == rank(qq)


def test_restricted_matrices_shapes():
    n, q = 5, 2
    K = random_subspace(10, 3, GF, seed=1)
    assert delta2_restricted_matrix(n, q, K).shape == (n * comb(n + q, q + 1), 3 * comb(n + q - 1, q))
    assert delta3_tilde_matrix(n, q, K).shape == ((10 - 3) * comb(n + q - 1, q), 10 * comb(n + q - 2, q - 1))
    kp = K.annihilator()
    assert d3_dual_matrix(n, q, kp).shape == (10 * comb(n + q - 2, q - 1), 7 * comb(n + q - 1, q))
    with pytest.raises(AmbientMismatch):
        delta2_restricted_matrix(4, q, K)


def test_dual_route_matches_delta2_route_small():
    for seed in range(4):
        n, m = 5, 4 + seed
        K = random_subspace(10, m, GF, seed=seed)
        for q in (1, 2):
            d1 = delta1_matrix(n, q, GF)
            via_delta2 = d1.ncols - rank(d1) - rank(delta2_restricted_matrix(n, q, K))
            d3 = d3_dual_matrix(n, q, K.annihilator())
            assert via_delta2 == d3.ncols - rank(d3)


def test_restricted_to_zero_space_is_empty():
    z = SubspaceBasis.zero(6, GF)
    assert delta2_restricted_matrix(4, 1, z).ncols == 0
    assert isinstance(delta3_tilde_matrix(4, 1, z), Matrix)
