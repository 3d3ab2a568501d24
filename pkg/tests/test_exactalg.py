import io
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from koszulkit.errors import MalformedInput, PreconditionViolated
from koszulkit.exactalg import (Echelon, Field, Matrix, ResidueStream, SubspaceBasis, contains,
                                dense_rank, intersect, is_prime, kernel_basis, random_subspace,
                                rank, rref, sparse_rank, subspace_sum)
from koszulkit.multilinear import delta2_matrix

GF = Field.GF()
QQ = Field.QQ()
SMALL = Field.GF(7)
BIG = Field.GF(2_147_483_647)


def small_matrices(max_rows=6, max_cols=7, lo=-4, hi=4):
    return st.integers(1, max_rows).flatmap(lambda r: st.integers(1, max_cols).flatmap(
        lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c),
                           min_size=r, max_size=r)))


# fields ----------------------------------------------------------------------

def test_field_parse_variants():
    assert Field.parse("QQ") == QQ
    assert Field.parse("GFp:101") == Field.parse("GF(101)") == Field.parse("GF:101") == Field.GF(101)
    for bad in ("GF(4)", "GF(2)", "RR", "GFp:"):
        with pytest.raises(MalformedInput):
            Field.parse(bad)


def test_field_coercion_and_inverse():
    f = Field.GF(7)
    assert f(-1) == 6
    assert f("3/2") == 3 * pow(2, -1, 7) % 7
    assert f(Fraction(1, 3)) * 3 % 7 == 1
    assert f.inv(3) * 3 % 7 == 1
    assert QQ("-2/6") == Fraction(-1, 3)
    with pytest.raises(MalformedInput):
        f(Fraction(1, 7))
    with pytest.raises(MalformedInput):
        QQ("x")
    with pytest.raises(ZeroDivisionError):
        f.inv(0)


def test_is_prime_small_table():
    assert [p for p in range(30) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert is_prime(32003) and not is_prime(32001)


# rank ------------------------------------------------------------------------

def test_rank_trivial_cases():
    assert rank(Matrix.identity(5, GF)) == 5
    assert rank(Matrix.zeros(3, 4, GF)) == 0
    assert rank(Matrix.zeros(0, 4, QQ)) == 0


def test_rank_delta2_n3_q0_is_full():
    # K = wedge^2 V: exactness at the first step forces injectivity
    d2 = delta2_matrix(3, 0, QQ)
    assert d2.shape == (9, 3)
    assert rank(d2) == 3
    assert oracles.rank(d2.to_lists()) == 3


@settings(max_examples=60, deadline=None)
@given(small_matrices())
def test_rank_matches_oracle_over_gf_and_qq(rows):
    for field, p in ((SMALL, 7), (GF, 32003), (QQ, None), (BIG, 2_147_483_647)):
        m = Matrix.from_rows(rows, field)
        assert rank(m) == oracles.rank(rows, p)
        assert rank(m) <= min(m.shape)


@settings(max_examples=40, deadline=None)
@given(small_matrices())
def test_rank_plus_nullity_is_cols(rows):
    for field in (SMALL, QQ):
        m = Matrix.from_rows(rows, field)
        ker = kernel_basis(m)
        assert rank(m) + ker.dim == m.ncols
        for v in ker.rows():
            assert not any(m.apply(v))


@settings(max_examples=40, deadline=None)
@given(small_matrices(max_rows=9, max_cols=9, lo=-1, hi=1))
def test_sparse_rank_matches_dense(rows):
    for field in (SMALL, QQ):
        m = Matrix.from_rows(rows, field)
        assert sparse_rank(m.rows(), field) == dense_rank(m.to_dense(), field)


def test_dense_engine_on_a_larger_random_matrix():
    # product of 40x25 and 25x60 random matrices has rank 25 generically
    stream = ResidueStream(11)
    a = stream.residues(40 * 25, 32003).reshape(40, 25)
    b = stream.residues(25 * 60, 32003).reshape(25, 60)
    prod = (a.astype(object) @ b.astype(object)) % 32003
    m = Matrix.from_rows(prod.tolist(), GF)
    assert rank(m) == 25
    assert sparse_rank(m.rows(), GF) == 25


def test_echelon_incremental_and_quotient_projection():
    e = Echelon(4, SMALL)
    assert e.add([[1, 2, 0, 1]]) == 1
    assert e.add([[2, 4, 0, 2]]) == 0
    assert e.add([[0, 0, 1, 1], [1, 2, 1, 2]]) == 1
    assert e.rank == 2 and not e.full
    proj = e.quotient_projection()
    assert proj.shape == (2, 4)
    # the projection kills the row space
    for row in ([1, 2, 0, 1], [0, 0, 1, 1]):
        assert not np.any(np.mod(proj @ np.array(row, dtype=float), 7))


def test_rref_is_canonical():
    rows = [[2, 4, 1, 0], [1, 2, 0, 3], [3, 6, 1, 3]]
    basis, piv = rref(rows, SMALL)
    shuffled, piv2 = rref([[3, 6, 1, 3], [0, 0, 2, 2], [1, 2, 0, 3]], SMALL)
    assert piv == piv2 == sorted(piv)
    assert np.array_equal(basis, shuffled)
    for r, c in enumerate(piv):
        assert basis[r, c] == 1
        assert sum(1 for x in basis[:, c] if x) == 1


# subspaces -------------------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=5, max_size=5), min_size=1, max_size=5),
       st.integers(0, 2 ** 32))
def test_subspace_basis_independent_of_generator_order(vectors, seed):
    a = SubspaceBasis.span(vectors, 5, QQ)
    rng = np.random.default_rng(seed)
    perm = rng.permutation(len(vectors))
    b = SubspaceBasis.span([vectors[i] for i in perm] + [vectors[0]], 5, QQ)
    assert a == b and hash(a) == hash(b)
    assert list(a.pivots) == sorted(a.pivots)
    assert a.dim == oracles.rank(vectors)


def _modular_law_holds(a, b):
    s = subspace_sum(a, b)
    i = intersect(a, b)
    return (s.dim + i.dim == a.dim + b.dim and contains(a, i) and contains(b, i)
            and contains(s, a) and contains(s, b))


@pytest.mark.parametrize("ambient", [6, 10, 15])
def test_modular_law_on_random_pairs(ambient):
    field = Field.GF(101)
    stream = ResidueStream(ambient)
    dims = stream.integers(400, 0, ambient)
    for k in range(200):
        a = random_subspace(ambient, int(dims[2 * k]), field, seed=1000 * ambient + 2 * k)
        b = random_subspace(ambient, int(dims[2 * k + 1]), field, seed=1000 * ambient + 2 * k + 1)
        if k % 3 == 0:
            # force a nontrivial intersection
            b = subspace_sum(b, SubspaceBasis.span(a.rows()[:1], ambient, field)) if a.dim else b
        assert _modular_law_holds(a, b)


def test_intersection_example_over_qq():
    a = SubspaceBasis.span([[1, 0, 0], [0, 1, 0]], 3, QQ)
    b = SubspaceBasis.span([[0, 1, 0], [0, 0, 1]], 3, QQ)
    assert intersect(a, b) == SubspaceBasis.span([[0, 1, 0]], 3, QQ)
    assert intersect(a, SubspaceBasis.zero(3, QQ)).dim == 0


def test_annihilator_and_coordinates():
    a = SubspaceBasis.span([[1, 2, 3, 4], [0, 1, 1, 0]], 4, QQ)
    ann = a.annihilator()
    assert ann.dim == 2
    for u in ann.rows():
        for v in a.rows():
            assert sum(x * y for x, y in zip(u, v)) == 0
    assert ann.annihilator() == a
    v = [2, 5, 7, 8]  # 2*(first) + 1*(second)
    assert a.contains_vector(v)
    coords = a.coordinates(v)
    recon = [sum(c * r[j] for c, r in zip(coords, a.rows())) for j in range(4)]
    assert recon == [QQ(x) for x in v]
    assert not a.contains_vector([0, 0, 0, 1])


def test_kernel_trivial_cases():
    assert kernel_basis(Matrix.identity(4, GF)).dim == 0
    assert kernel_basis(Matrix.zeros(2, 5, GF)) == SubspaceBasis.full(5, GF)


def test_random_subspace_is_seeded():
    a = random_subspace(10, 4, GF, seed=5)
    assert a == random_subspace(10, 4, GF, seed=5)
    assert a.dim == 4
    assert a != random_subspace(10, 4, GF, seed=6)
    with pytest.raises(PreconditionViolated):
        random_subspace(10, 4, QQ, seed=5)
    with pytest.raises(PreconditionViolated):
        random_subspace(3, 4, GF, seed=5)


def test_residue_stream_range_and_determinism():
    a = ResidueStream(3).residues(1000, 32003)
    b = ResidueStream(3).residues(1000, 32003)
    assert np.array_equal(a, b)
    assert a.min() >= 0 and a.max() < 32003
    ints = ResidueStream(4).integers(500, 2, 5)
    assert set(ints.tolist()) == {2, 3, 4, 5}
    with pytest.raises(ValueError):
        ResidueStream(-1)


# Matrix container and TSV ---------------------------------------------------

def test_matrix_sparse_storage_invariants():
    m = Matrix.from_entries(2, 3, [(0, 1, 2), (0, 1, 5), (1, 2, 0), (1, 0, 3)], SMALL)
    assert m.entries() == [(1, 0, 3)]  # 2 + 5 = 0 mod 7 and the explicit zero vanish
    assert m.nnz == 1
    with pytest.raises(MalformedInput):
        Matrix.from_rows([[1, 2], [3]], SMALL)


def test_matrix_product_and_transpose():
    a = Matrix.from_rows([[1, 2], [3, 4], [5, 6]], QQ)
    b = Matrix.from_rows([[1, 0, 1], [0, 1, 1]], QQ)
    assert (a @ b).to_lists() == [[1, 2, 3], [3, 4, 7], [5, 6, 11]]
    assert a.transpose().transpose() == a
    assert a.apply([1, -1]) == [-1, -1, -1]


def test_tsv_roundtrip_and_rejections():
    m = Matrix.from_rows([[1, "1/2", 0], [0, 0, "-3"]], QQ)
    buf = io.StringIO()
    m.write_tsv(buf)
    text = buf.getvalue()
    assert text.splitlines()[0] == "# 2 3 QQ"
    assert "0\t1\t1/2" in text
    assert Matrix.read_tsv(io.StringIO(text)) == m
    with pytest.raises(MalformedInput):
        Matrix.read_tsv(io.StringIO("# 2 2 QQ\n0\t0\t1\n0\t0\t2\n"))
    with pytest.raises(MalformedInput):
        Matrix.read_tsv(io.StringIO("2 2 QQ\n"))
    with pytest.raises(MalformedInput):
        Matrix.read_tsv(io.StringIO("# 2 2 GF(9)\n"))
    with pytest.raises(MalformedInput):
        Matrix.read_tsv(io.StringIO("# 2 2 QQ\n5\t0\t1\n"))
