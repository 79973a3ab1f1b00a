"""Sparse exact matrices, Kronecker embedding, and the weighted transposition."""

import pytest
from hypothesis import given, settings, strategies as st

from qav.scalars import Scalar, ONE, ZERO
from qav.liedata import AlgebraData
from qav.tensor import (
    MatrixError,
    SingularMatrixError,
    SparseMat,
    dmat,
    dmat_inverse,
    embed_leg,
    transpose_t,
    transpose_t1,
)

# -- dense reference implementation ------------------------------------------


def dense(m: SparseMat):
    return [[m.get(i, j) for j in range(m.ncols)] for i in range(m.nrows)]


def dense_mul(a, b):
    return [
        [
            sum((a[i][k] * b[k][j] for k in range(len(b))), ZERO)
            for j in range(len(b[0]))
        ]
        for i in range(len(a))
    ]


def dense_kron(a, b):
    ra, ca, rb, cb = len(a), len(a[0]), len(b), len(b[0])
    return [
        [a[i // rb][j // cb] * b[i % rb][j % cb] for j in range(ca * cb)]
        for i in range(ra * rb)
    ]


def from_dense(rows):
    return SparseMat.from_entries(
        len(rows),
        len(rows[0]),
        [(i, j, x) for i, r in enumerate(rows) for j, x in enumerate(r)],
    )


@st.composite
def small_mats(draw, n=None):
    dim = n if n is not None else draw(st.integers(2, 3))
    rows = [
        [Scalar.from_int(draw(st.integers(-3, 3))) for _ in range(dim)]
        for _ in range(dim)
    ]
    return from_dense(rows)


# -- arithmetic against the dense oracle --------------------------------------


@settings(max_examples=50, deadline=None)
@given(small_mats(n=3), small_mats(n=3))
def test_matrix_product_matches_dense(a, b):
    assert dense(a * b) == dense_mul(dense(a), dense(b))


@settings(max_examples=50, deadline=None)
@given(small_mats(n=2), small_mats(n=3))
def test_kron_matches_dense(a, b):
    assert dense(a.kron(b)) == dense_kron(dense(a), dense(b))


@settings(max_examples=50, deadline=None)
@given(small_mats(n=2), small_mats(n=2), small_mats(n=2), small_mats(n=2))
def test_kron_mixed_product_rule(a, b, c, d):
    assert (a.kron(b)) * (c.kron(d)) == (a * c).kron(b * d)


@settings(max_examples=50, deadline=None)
@given(small_mats(n=3))
def test_inverse_roundtrip(m):
    try:
        inv = m.inverse()
    except SingularMatrixError:
        return
    assert m * inv == SparseMat.identity(3)
    assert inv * m == SparseMat.identity(3)


def test_from_entries_sums_collisions():
    m = SparseMat.from_entries(2, 2, [(0, 1, ONE), (0, 1, ONE), (1, 0, -ONE)])
    assert m.get(0, 1) == Scalar.from_int(2)
    assert m.get(1, 0) == -ONE
    assert m.get(0, 0).is_zero()
    assert m.nnz() == 2


def test_shape_errors():
    a = SparseMat.identity(2)
    b = SparseMat.identity(3)
    with pytest.raises(MatrixError):
        a + b
    with pytest.raises(MatrixError):
        a * b
    with pytest.raises(MatrixError):
        SparseMat.zeros(2, 3).inverse()


# -- tensor-leg embedding ------------------------------------------------------


def test_embed_leg_12_is_kron_with_identity():
    N = 2
    a = from_dense([[ONE, Scalar.s_pow(1)], [ZERO, -ONE]])
    b = from_dense([[Scalar.from_int(2), ZERO], [ONE, ONE]])
    op = a.kron(b)
    assert embed_leg(op, (1, 2), N) == op.kron(SparseMat.identity(N))
    assert embed_leg(op, (2, 3), N) == SparseMat.identity(N).kron(op)


def test_embed_leg_is_multiplicative():
    N = 2
    x = from_dense([[ONE, Scalar.w()], [ZERO, ONE]]).kron(
        from_dense([[ONE, ZERO], [Scalar.s_pow(-1), -ONE]])
    )
    y = from_dense([[ZERO, ONE], [ONE, ZERO]]).kron(
        from_dense([[ONE, ONE], [ZERO, ONE]])
    )
    for legs in ((1, 2), (1, 3), (2, 3)):
        assert embed_leg(x, legs, N) * embed_leg(y, legs, N) == embed_leg(
            x * y, legs, N
        )


def test_embed_leg_disjoint_factors_commute():
    N = 2
    a = from_dense([[ONE, Scalar.s_pow(2)], [ONE, -ONE]])
    b = from_dense([[ZERO, ONE], [ONE, ONE]])
    m1 = embed_leg(a.kron(SparseMat.identity(N)), (1, 2), N)
    m23 = embed_leg(SparseMat.identity(N).kron(b), (2, 3), N)
    assert m1 * m23 == m23 * m1


def test_embed_leg_rejects_bad_legs():
    op = SparseMat.identity(4)
    with pytest.raises(MatrixError):
        embed_leg(op, (1, 1), 2)
    with pytest.raises(MatrixError):
        embed_leg(op, (0, 2), 2)


# -- weighted transposition and the matrix D -----------------------------------


@pytest.mark.parametrize("type_,rank", [("B", 1), ("D", 2)])
def test_transpose_t_is_an_involutive_antihomomorphism(type_, rank):
    alg = AlgebraData(type_, rank)
    N = alg.N
    a = SparseMat.from_entries(
        N, N, [(i, j, Scalar.from_int(3 * i - j + 1)) for i in range(N) for j in range(N)]
    )
    b = SparseMat.from_entries(
        N, N, [(i, j, Scalar.s_pow((i + j) % 3 - 1)) for i in range(N) for j in range(N)]
    )
    assert transpose_t(transpose_t(a, alg), alg) == a
    assert transpose_t(a * b, alg) == transpose_t(b, alg) * transpose_t(a, alg)


def test_transpose_t_moves_units_to_primed_slots():
    alg = AlgebraData("B", 2)
    N = alg.N
    # e_ij -> e_{j'i'} with i' = N+1-i (1-based)
    for i, j in [(1, 2), (3, 5), (2, 2)]:
        src = SparseMat.unit(N, i - 1, j - 1)
        dst = transpose_t(src, alg)
        assert dst.get(alg.prime(j) - 1, alg.prime(i) - 1) == ONE
        assert dst.nnz() == 1


def test_transpose_t1_acts_on_first_factor_only():
    alg = AlgebraData("D", 2)
    N = alg.N
    a = SparseMat.from_entries(
        N, N, [(i, j, Scalar.from_int(i + 2 * j + 1)) for i in range(N) for j in range(N)]
    )
    b = SparseMat.identity(N, Scalar.s_pow(1))
    assert transpose_t1(a.kron(b), alg) == transpose_t(a, alg).kron(b)


@pytest.mark.parametrize("type_,rank", [("B", 1), ("B", 2), ("D", 2), ("D", 3)])
def test_dmat_inverse_pairs(type_, rank):
    alg = AlgebraData(type_, rank)
    assert dmat(alg) * dmat_inverse(alg) == SparseMat.identity(alg.N)
