"""Field arithmetic in Q(s,u,v)[w]/(w^2 - s - 1/s) and the q-combinatorics."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qav.scalars import (
    Scalar,
    ScalarError,
    ONE,
    ZERO,
    qint,
    qfact,
    qbinom,
)

# -- strategies -------------------------------------------------------------

_atoms = st.one_of(
    st.integers(min_value=-3, max_value=3).map(Scalar.from_int),
    st.integers(min_value=-2, max_value=2).map(Scalar.s_pow),
    st.integers(min_value=0, max_value=2).map(Scalar.u_pow),
    st.integers(min_value=0, max_value=2).map(Scalar.v_pow),
    st.just(Scalar.w()),
)


@st.composite
def scalars(draw):
    """Small random field elements built from sums and products of atoms."""
    terms = draw(st.lists(_atoms, min_size=1, max_size=3))
    acc = terms[0]
    for t in terms[1:]:
        acc = acc * t if draw(st.booleans()) else acc + t
    if draw(st.booleans()):
        acc = -acc
    return acc


# -- frozen combinatorial oracles -------------------------------------------


def test_qint_closed_forms():
    q = Scalar.q_pow(1)
    qi = Scalar.q_pow(-1)
    assert qint(1) == ONE
    assert qint(2) == q + qi
    assert qint(3) == q * q + ONE + qi * qi
    assert qint(2, 2) == Scalar.q_pow(2) + Scalar.q_pow(-2)
    # [k]_{q^r} is the r-dilated integer
    assert qint(3, 2) == Scalar.q_pow(4) + ONE + Scalar.q_pow(-4)


def test_qfact_is_product_of_qints():
    acc = ONE
    for k in range(1, 6):
        acc = acc * qint(k)
        assert qfact(k) == acc


@pytest.mark.parametrize("k", range(2, 7))
@pytest.mark.parametrize("r", [1, 2])
def test_qbinom_pascal_recurrence(k, r):
    # symmetric q-Pascal: [k;l] = q^(k-l) [k-1;l-1] + q^(-l) [k-1;l]
    for l in range(1, k):
        lhs = qbinom(k, l, r)
        rhs = Scalar.q_pow(r * (k - l)) * qbinom(k - 1, l - 1, r) + Scalar.q_pow(
            -r * l
        ) * qbinom(k - 1, l, r)
        assert (lhs - rhs).is_zero()


def test_qbinom_times_factorials_is_factorial():
    for k in range(1, 6):
        for l in range(k + 1):
            assert (qbinom(k, l) * qfact(l) * qfact(k - l) - qfact(k)).is_zero()


def test_w_square_is_s_plus_s_inverse():
    w = Scalar.w()
    half = Fraction(1, 2)
    assert (w * w - (Scalar.q_pow(half) + Scalar.q_pow(-half))).is_zero()
    # w is invertible: 1/w = w / (s + 1/s)
    assert (w * w.inverse() - ONE).is_zero()


def test_q_pow_half_integers_only():
    assert Scalar.q_pow(Fraction(3, 2)) == Scalar.s_pow(3)
    with pytest.raises(ScalarError):
        Scalar.q_pow(Fraction(1, 3))


# -- frozen q-adic expansions ------------------------------------------------


def test_qadic_laurent_of_qint3():
    lead, coeffs = qint(3).qadic_laurent(4)
    assert lead == 2
    assert coeffs == [Fraction(1), Fraction(0), Fraction(1), Fraction(0), Fraction(1)]


def test_qadic_laurent_of_inverse_qint2():
    # 1/(q + q^-1) = q^-1 - q^-3 + q^-5 - ...
    lead, coeffs = qint(2).inverse().qadic_laurent(6)
    assert lead == -1
    assert coeffs == [
        Fraction(1),
        Fraction(0),
        Fraction(-1),
        Fraction(0),
        Fraction(1),
        Fraction(0),
        Fraction(-1),
    ]


def test_qadic_rejects_u_v_w():
    with pytest.raises(ScalarError):
        Scalar.u_pow(1).qadic_laurent(2)
    with pytest.raises(ScalarError):
        Scalar.w().qadic_laurent(2)
    with pytest.raises(ScalarError):
        Scalar.s_pow(1).qadic_laurent(2)  # odd power of s is not integral in q


# -- substitution and coefficient extraction ---------------------------------


def test_subs_u_evaluates_rational_functions():
    u = Scalar.u_pow(1)
    y = ONE - u * Scalar.q_pow(2)
    assert y.subs_u(Scalar.q_pow(-2)).is_zero()
    assert y.subs_u(ZERO) == ONE
    with pytest.raises(ScalarError):
        y.inverse().subs_u(Scalar.q_pow(-2))  # evaluation at a pole


def test_uv_coeffs_reconstructs_polynomials():
    q = Scalar.q_pow(1)
    x = (
        Scalar.u_pow(2) * Scalar.v_pow(1) * q
        + Scalar.u_pow(1) * Scalar.w()
        - Scalar.fraction(3, 2)
    )
    parts = x.uv_coeffs()
    assert set(parts) == {(2, 1), (1, 0), (0, 0)}
    acc = ZERO
    for (du, dv), c in parts.items():
        assert c.is_uv_free()
        acc = acc + c * Scalar.u_pow(du) * Scalar.v_pow(dv)
    assert (acc - x).is_zero()


def test_uv_coeffs_rejects_u_in_denominator():
    with pytest.raises(ScalarError):
        (ONE - Scalar.u_pow(1)).inverse().uv_coeffs()


def test_parse_str_roundtrip():
    samples = [
        ONE,
        qint(3),
        Scalar.w() * Scalar.u_pow(2) - Scalar.fraction(1, 3),
        (Scalar.u_pow(1) - Scalar.q_pow(2)) / (ONE - Scalar.v_pow(1)),
    ]
    for x in samples:
        assert Scalar.parse(str(x)) == x


# -- field axioms (property-based) -------------------------------------------


@settings(max_examples=60, deadline=None)
@given(scalars(), scalars(), scalars())
def test_ring_axioms(a, b, c):
    assert (a + b) - (b + a) == ZERO
    assert ((a + b) + c) == (a + (b + c))
    assert (a * b) == (b * a)
    assert ((a * b) * c) == (a * (b * c))
    assert (a * (b + c)) == (a * b + a * c)
    assert (a + (-a)).is_zero()
    assert a * ONE == a
    assert (a * ZERO).is_zero()


@settings(max_examples=60, deadline=None)
@given(scalars())
def test_multiplicative_inverse(a):
    if a.is_zero():
        with pytest.raises(ScalarError):
            a.inverse()
        return
    assert (a * a.inverse() - ONE).is_zero()
    assert ((ONE / a) * a - ONE).is_zero()


@settings(max_examples=40, deadline=None)
@given(scalars(), st.integers(min_value=0, max_value=4))
def test_pow_matches_repeated_product(a, k):
    acc = ONE
    for _ in range(k):
        acc = acc * a
    assert a**k == acc
