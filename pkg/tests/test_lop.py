"""L-operators, Gaussian generators, and the relation suites (fast smoke at
low truncation order; the full order-10 runs live in test_acceptance)."""

import pytest

from qav.liedata import AlgebraData
from qav.lop import (
    LopError,
    build_lops,
    check_eiprei,
    check_gauss,
    check_lowrank,
    check_main_theorem_structure,
    check_psi_consistency,
    check_relrbar,
    gaussian_generators,
    z_series,
)
from qav.series import AT_INFINITY, AT_ZERO
from qav.tensor import SparseMat

from conftest import all_pass, failures

K = 6


@pytest.fixture(scope="module")
def b1():
    return AlgebraData("B", 1)


@pytest.fixture(scope="module")
def d2():
    return AlgebraData("D", 2)


def test_build_lops_selects_unique_wiring(b1):
    lops = build_lops(b1, K)
    assert lops.wiring["base"] == "swapped"
    assert lops.wiring["plus_expansion"] == AT_ZERO
    # exactly one candidate survived the full invariant cascade
    assert sum(1 for c in lops.candidates if c["exchange"]) == 1


def test_build_lops_triangular_constant_terms(d2):
    lops = build_lops(d2, K)
    N = lops.N
    zero = SparseMat.zeros(N, N)
    for i in range(N):
        for j in range(N):
            if i > j:
                assert lops.lp[i][j].coefficient(0, zero=zero).is_zero()
            if i < j:
                assert lops.lm[i][j].coefficient(0, zero=zero).is_zero()


def test_build_lops_memoizes_and_validates(b1):
    assert build_lops(b1, K) is build_lops(b1, K)
    with pytest.raises(LopError):
        build_lops(b1, 0)


def test_plus_and_minus_expansions_share_rational_entries(b1):
    """Both signs expand the same rational matrix, so overlapping
    coefficients must agree where both expansions are polynomial (entry-wise
    diagonal constant terms differ only by the q^-1 vs q normalization)."""
    lops = build_lops(b1, K)
    assert lops.lp[0][0].direction == AT_ZERO
    assert lops.lm[0][0].direction == AT_INFINITY


def test_check_gauss(b1):
    checks = check_gauss(b1, K)
    assert all_pass(checks), failures(checks)
    assert any("perturbation" in c["name"] for c in checks)


def test_gaussian_generators_accessors(d2):
    gs = gaussian_generators(build_lops(d2, K))
    # h-series have invertible constant terms (diagonal matrices)
    for i in range(1, gs.N + 1):
        for sign in (1, -1):
            h0 = gs.h(i, sign).coefficient(0, zero=SparseMat.zeros(gs.N, gs.N))
            assert not h0.is_zero()
            h0.inverse()  # must not raise


def test_lowrank_b1(b1):
    checks = check_lowrank(b1, K)
    assert len(checks) >= 40
    assert all_pass(checks), failures(checks)


def test_lowrank_d2(d2):
    checks = check_lowrank(d2, K)
    assert len(checks) >= 100
    assert all_pass(checks), failures(checks)
    names = " | ".join(c["name"] for c in checks)
    assert "e23" in names and "f32" in names and "e14" in names and "e24" in names


def test_lowrank_rejects_other_algebras():
    with pytest.raises(LopError):
        check_lowrank(AlgebraData("B", 2), K)


def test_relrbar_smoke(b1, d2):
    for alg in (b1, d2):
        checks = check_relrbar(alg, K, 2)
        assert all_pass(checks), failures(checks)


def test_z_series_b1(b1):
    zp, zm, checks = z_series(b1, K)
    assert all_pass(checks), failures(checks)
    assert zp.direction == AT_ZERO and zm.direction == AT_INFINITY
    # central series starts at 1 + O(u): constant term is invertible
    assert not zp.coefficient(0).is_zero()


def test_eiprei_d2(d2):
    checks = check_eiprei(d2, K)
    assert all_pass(checks), failures(checks)


def test_psi_consistency_d2(d2):
    checks = check_psi_consistency(d2, 1, K)
    assert all_pass(checks), failures(checks)
    with pytest.raises((LopError, ValueError)):
        check_psi_consistency(d2, 2, K)  # m must be < n


def test_main_structure_b1(b1):
    checks = check_main_theorem_structure(b1, K)
    assert all_pass(checks), failures(checks)
