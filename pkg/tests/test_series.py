"""Truncated Laurent series arithmetic and the normalizing-series solvers."""

import pytest
from hypothesis import given, settings, strategies as st

from qav.scalars import Scalar, ONE, ZERO, qint
from qav.series import (
    AT_INFINITY,
    AT_ZERO,
    SeriesError,
    TruncSeries,
    expand_scalar,
    f_series,
    g_series,
    series_exp,
    series_log,
    solve_sqrt_scaled,
)
from qav.liedata import AlgebraData

K = 8

_coef = st.one_of(
    st.integers(min_value=-3, max_value=3).map(Scalar.from_int),
    st.integers(min_value=-2, max_value=2).map(Scalar.s_pow),
    st.just(Scalar.w()),
)


@st.composite
def trunc_series(draw, direction=AT_ZERO, order=5, unit_constant=False):
    coeffs = {
        m: draw(_coef)
        for m in draw(st.lists(st.integers(0, order), max_size=4, unique=True))
    }
    if unit_constant:
        coeffs[0] = ONE
    return TruncSeries(direction, order, coeffs)


# -- frozen expansions --------------------------------------------------------


def test_geometric_series_at_zero():
    x = (ONE - Scalar.u_pow(1)).inverse()
    s = expand_scalar(x, AT_ZERO, K)
    for k in range(K + 1):
        assert s.coefficient(k) == ONE


def test_geometric_series_at_infinity():
    # 1/(1-u) = -u^-1 - u^-2 - ... at infinity
    x = (ONE - Scalar.u_pow(1)).inverse()
    s = expand_scalar(x, AT_INFINITY, K)
    assert s.coefficient(0).is_zero()
    for k in range(1, K + 1):
        assert s.coefficient(-k) == -ONE


def test_expand_scalar_rejects_wrong_direction():
    with pytest.raises(SeriesError):
        expand_scalar(Scalar.u_pow(-1), AT_ZERO, 4)
    with pytest.raises(SeriesError):
        expand_scalar(Scalar.u_pow(1), AT_INFINITY, 4)


def test_scale_arg_on_geometric():
    # substituting u -> q^2 u in 1/(1-u) matches expanding 1/(1-q^2 u)
    base = expand_scalar((ONE - Scalar.u_pow(1)).inverse(), AT_ZERO, K)
    shifted = base.scale_arg(Scalar.q_pow(2))
    direct = expand_scalar(
        (ONE - Scalar.u_pow(1) * Scalar.q_pow(2)).inverse(), AT_ZERO, K
    )
    assert shifted == direct


# -- ring and composition properties ------------------------------------------


@settings(max_examples=50, deadline=None)
@given(trunc_series(), trunc_series(), trunc_series())
def test_series_ring_axioms(f, g, h):
    assert (f + g) == (g + f)
    assert (f * g) == (g * f)
    assert ((f * g) * h) == (f * (g * h))
    assert (f * (g + h)) == (f * g + f * h)
    assert (f - f).is_zero()


@settings(max_examples=50, deadline=None)
@given(trunc_series(unit_constant=True))
def test_series_inverse(f):
    assert (f * f.inverse()) == TruncSeries.one(AT_ZERO, f.order)


@settings(max_examples=50, deadline=None)
@given(trunc_series(), trunc_series())
def test_scale_arg_is_multiplicative(f, g):
    c = Scalar.q_pow(2)
    assert (f * g).scale_arg(c) == f.scale_arg(c) * g.scale_arg(c)


@settings(max_examples=40, deadline=None)
@given(trunc_series(unit_constant=True))
def test_log_exp_roundtrip(f):
    assert series_exp(series_log(f)) == f


def test_log_of_product_is_sum_of_logs():
    f = TruncSeries(AT_ZERO, 6, {0: ONE, 1: qint(2), 3: Scalar.s_pow(-1)})
    g = TruncSeries(AT_ZERO, 6, {0: ONE, 2: Scalar.w()})
    assert series_log(f * g) == series_log(f) + series_log(g)


# -- functional-equation solvers -----------------------------------------------


def test_solve_sqrt_scaled_satisfies_equation():
    xi = Scalar.q_pow(-3)
    r = expand_scalar(
        ((ONE - Scalar.u_pow(1)) * (ONE - Scalar.u_pow(1) * xi)).inverse(),
        AT_ZERO,
        K,
    )
    f = solve_sqrt_scaled(r, xi)
    assert f * f.scale_arg(xi) == r
    assert f.coefficient(0) == ONE


def test_f_series_satisfies_its_functional_equation():
    alg = AlgebraData("B", 1)
    f = f_series(alg, K)
    u = Scalar.u_pow(1)
    rhs = expand_scalar(
        (
            (ONE - u * Scalar.q_pow(-2))
            * (ONE - u * Scalar.q_pow(2))
            * (ONE - u * alg.xi)
            * (ONE - u * alg.xi.inverse())
        ).inverse(),
        AT_ZERO,
        K,
    )
    assert f * f.scale_arg(alg.xi) == rhs


def test_g_series_relates_to_f_series():
    alg = AlgebraData("D", 2)
    u = Scalar.u_pow(1)
    poly = expand_scalar((u - Scalar.q_pow(-2)) * (u - alg.xi), AT_ZERO, K)
    assert g_series(alg, K) == f_series(alg, K) * poly


def test_coefficient_out_of_range_returns_default():
    f = TruncSeries(AT_ZERO, 3, {1: ONE})
    assert f.get(-1) is None
    assert f.coefficient(7) == ZERO
    assert f.coefficient(1) == ONE
