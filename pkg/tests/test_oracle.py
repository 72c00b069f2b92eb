import math

import numpy as np
import pytest

from gaussdiv import DimensionMismatch, DimensionTooLarge, Gaussian1D, GaussianND, InvalidParameter, MaxDepthExceeded
from gaussdiv.oracle import (
    MonteCarloSettings,
    QuadratureSettings,
    box_muller,
    integrate_1d,
    oracle_bhattacharyya,
    oracle_l2_norm_squared,
    oracle_overlap,
    oracle_psi_1d,
    oracle_psi_nd,
    oracle_sq_difference,
)
from gaussdiv.gaussian import pdf_1d

SMALL_MC = MonteCarloSettings(samples=200_000, seed=11)


def test_polynomial_exact():
    assert integrate_1d(lambda x: x**3 - 2 * x + 1, (0.0, 2.0)) == pytest.approx(2.0, abs=1e-13)


def test_normalization():
    for g in (Gaussian1D(0, 1), Gaussian1D(2, 0.3), Gaussian1D(-1, 5)):
        lo, hi = g.mu - 12 * g.sigma, g.mu + 12 * g.sigma
        assert integrate_1d(lambda x: pdf_1d(g, x), (lo, hi), initial_panels=16) == pytest.approx(1.0, abs=1e-11)


def test_l2_norm_standard():
    assert abs(oracle_l2_norm_squared(Gaussian1D(0, 1)) - 0.28209479177387814) <= 1e-11


def test_sq_difference_zero_for_identical():
    g = Gaussian1D(0.4, 0.7)
    assert oracle_sq_difference(g, g) == 0.0


def test_bhattacharyya_examples():
    assert oracle_bhattacharyya(Gaussian1D(0, 1), Gaussian1D(1, 1)) == pytest.approx(math.exp(-1 / 8), abs=1e-10)
    assert oracle_bhattacharyya(Gaussian1D(0, 1), Gaussian1D(0, 2)) == pytest.approx(math.sqrt(0.8), abs=1e-10)


def test_tolerance_halving_is_stable():
    p, q = Gaussian1D(0, 0.5), Gaussian1D(1, 2)
    for tol in (1e-8, 1e-10, 1e-12):
        coarse = oracle_overlap(p, q, QuadratureSettings(abs_tol=tol))
        fine = oracle_overlap(p, q, QuadratureSettings(abs_tol=tol / 2))
        assert abs(coarse - fine) <= tol


def test_max_depth_carries_partial():
    def spiky(x):
        return np.sin(1.0 / np.maximum(x, 1e-300))

    with pytest.raises(MaxDepthExceeded) as info:
        integrate_1d(spiky, (1e-6, 1.0), QuadratureSettings(abs_tol=1e-15, max_depth=12))
    assert math.isfinite(info.value.partial)
    assert info.value.max_depth == 12
    assert info.value.code == "MaxDepthExceeded"


@pytest.mark.parametrize("kwargs", [{"abs_tol": 0.0}, {"max_depth": 5}, {"support_halfwidth": -1.0}])
def test_quadrature_settings_validation(kwargs):
    with pytest.raises(InvalidParameter):
        QuadratureSettings(**kwargs)


def test_monte_carlo_settings_validation():
    with pytest.raises(InvalidParameter):
        MonteCarloSettings(samples=100)
    with pytest.raises(InvalidParameter):
        MonteCarloSettings(seed=-1)


def test_empty_support():
    with pytest.raises(InvalidParameter):
        integrate_1d(np.sin, (1.0, 1.0))


@pytest.mark.parametrize("p, q, expected", [
    (Gaussian1D(0, 1), Gaussian1D(1, 1), 0.48428881231478159),
    (Gaussian1D(0, 0.3), Gaussian1D(0, 0.4), 5.6596188540054348),
    (Gaussian1D(0, 1), Gaussian1D(0, 2), 0.21509036135300343),
])
def test_oracle_psi_references(p, q, expected):
    assert oracle_psi_1d(p, q) == pytest.approx(expected, rel=1e-10)


def test_box_muller_moments():
    rng = np.random.default_rng(0)
    z = box_muller(rng, 400_001)
    assert z.shape == (400_001,)
    assert abs(z.mean()) < 5 / math.sqrt(z.size)
    assert z.var() == pytest.approx(1.0, abs=0.01)


def test_mc_matches_quadrature_in_one_dimension():
    p, q = Gaussian1D(0, 1), Gaussian1D(0.5, 1.5)
    res = oracle_psi_nd(GaussianND.from_1d(p), GaussianND.from_1d(q), mc=SMALL_MC, method="mc")
    assert res.method == "mc"
    assert abs(res.int_p2 - oracle_l2_norm_squared(p)) <= 3 * res.se_p2
    assert abs(res.int_q2 - oracle_l2_norm_squared(q)) <= 3 * res.se_q2
    assert abs(res.int_pq - oracle_overlap(p, q)) <= 3 * res.se_pq


def test_mc_two_dimensional_norm():
    g = GaussianND([0.0, 0.0], np.eye(2))
    res = oracle_psi_nd(g, g, mc=SMALL_MC, method="mc")
    assert abs(res.int_p2 - 1 / (4 * math.pi)) <= 3 * res.se_p2


def test_mc_is_deterministic():
    p = GaussianND([0.0, 0.0, 0.0, 0.0], np.eye(4))
    q = GaussianND([0.5, 0.0, 0.0, 0.0], 2 * np.eye(4))
    a = oracle_psi_nd(p, q, mc=SMALL_MC)
    b = oracle_psi_nd(p, q, mc=SMALL_MC)
    assert a.method == "mc"
    assert a == b


def test_grid_is_exact_for_standard_norm():
    g = GaussianND([0.0, 0.0], np.eye(2))
    res = oracle_psi_nd(g, g, method="grid")
    assert res.int_p2 == pytest.approx(1 / (4 * math.pi), rel=1e-13)
    assert res.se_p2 == 0.0 and res.method == "grid"


def test_dimension_limits():
    g4 = GaussianND(np.zeros(4), np.eye(4))
    g7 = GaussianND(np.zeros(7), np.eye(7))
    with pytest.raises(DimensionTooLarge):
        oracle_psi_nd(g4, g4, method="grid")
    with pytest.raises(DimensionTooLarge):
        oracle_psi_nd(g7, g7)
    with pytest.raises(DimensionMismatch):
        oracle_psi_nd(g4, g7)
    with pytest.raises(InvalidParameter):
        oracle_psi_nd(g4, g4, method="simpson")
