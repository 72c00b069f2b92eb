import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gaussdiv import (
    BelowValidityTime,
    BrownianPair,
    CauchySchwarzViolation,
    Gaussian1D,
    InvalidNorm,
    InvalidParameter,
    brownian_psi,
    brownian_t_min,
    brownian_trajectory,
    l2_norm_squared,
    lambda_term,
    psi_closed_form,
    psi_from_integrals,
    psi_limit_sigma,
)
from gaussdiv.oracle import oracle_l2_norm_squared, oracle_overlap, oracle_psi_1d
from gaussdiv.psi import SIGMA_MIN, brownian_lambda, psi

SQRT_PI = math.sqrt(math.pi)
# 40-digit quadrature references (mpmath), independent of this package
PSI_UNIT_SHIFT = 0.48428881231478159
PSI_NARROW = 5.6596188540054348  # (0, 0.3; 0, 0.4)
PSI_SCALE_1_2 = 0.21509036135300343  # (0, 1; 0, 2)

# rounded means: separations like 1e-170 give a Psi below the smallest double
valid_gaussians = st.builds(Gaussian1D, st.floats(-5, 5).map(lambda m: round(m, 9)), st.floats(0.3, 10))


def literal_psi(p, q):
    """Closed form exactly as printed, no regrouping."""
    lam = math.exp(-(p.mu - q.mu) ** 2 / (2 * (p.var + q.var))) * (math.pi * (p.var + q.var)) ** -0.5
    num = (p.sigma * SQRT_PI) ** -1 - 2 * math.sqrt(2) * lam + (q.sigma * SQRT_PI) ** -1
    return num / ((1 - (2 * p.sigma * SQRT_PI) ** -1) * (1 - (2 * q.sigma * SQRT_PI) ** -1))


def literal_brownian(bp, t):
    lam_t = math.exp(-t * (bp.drift_p - bp.drift_q) ** 2 / (2 * (bp.vol_p**2 + bp.vol_q**2))) * (
        t * math.pi * (bp.vol_p**2 + bp.vol_q**2)) ** -0.5
    num = (bp.vol_p * math.sqrt(t * math.pi)) ** -1 - 2 * math.sqrt(2) * lam_t + (bp.vol_q * math.sqrt(t * math.pi)) ** -1
    return num / ((1 - (2 * bp.vol_p * math.sqrt(t * math.pi)) ** -1) * (1 - (2 * bp.vol_q * math.sqrt(t * math.pi)) ** -1))


# -- norms and lambda --------------------------------------------------------

def test_l2_norm_examples():
    assert l2_norm_squared(Gaussian1D(0, 1)) == pytest.approx(0.28209479177387814, rel=1e-15)
    assert abs(oracle_l2_norm_squared(Gaussian1D(0, 1)) - 1 / (2 * SQRT_PI)) <= 1e-10
    assert l2_norm_squared(Gaussian1D(0, SIGMA_MIN)) == pytest.approx(1.0, rel=1e-15)
    assert l2_norm_squared(Gaussian1D(3, 4.0)) == l2_norm_squared(Gaussian1D(3, 2.0)) / 2


def test_lambda_examples():
    assert lambda_term(Gaussian1D(0, 1), Gaussian1D(0, 1)) == pytest.approx(1 / math.sqrt(2 * math.pi), rel=1e-15)
    p, q = Gaussian1D(0, 1), Gaussian1D(1, 1)
    assert lambda_term(p, q) == pytest.approx(math.exp(-0.25) / math.sqrt(2 * math.pi), rel=1e-15)
    assert lambda_term(p, q) == pytest.approx(0.31069656037692774, rel=1e-15)
    assert abs(4 * oracle_overlap(p, q) - 2 * math.sqrt(2) * lambda_term(p, q)) <= 1e-10
    assert lambda_term(Gaussian1D(0, 1), Gaussian1D(50, 1)) < 1e-200


def test_product_of_densities_identity():
    rng = np.random.default_rng(4)
    for _ in range(50):
        mp_, mq = rng.uniform(-3, 3, 2)
        sp, sq = rng.uniform(0.3, 5, 2)
        s = sp * sp + sq * sq
        mu_pq = (mp_ * sq * sq + mq * sp * sp) / s
        s_pq = math.sqrt(sp * sp * sq * sq / s)
        h_pq = math.exp(-(mp_ - mq) ** 2 / (2 * s)) / math.sqrt(2 * math.pi * s)
        for x in rng.uniform(-4, 4, 20):
            direct = math.exp(-(x - mp_) ** 2 / (2 * sp * sp) - (x - mq) ** 2 / (2 * sq * sq)) / (2 * math.pi * sp * sq)
            combined = h_pq / (math.sqrt(2 * math.pi) * s_pq) * math.exp(-(x - mu_pq) ** 2 / (2 * s_pq**2))
            assert combined == pytest.approx(direct, rel=1e-12)
        # 4 h_pq = 2 sqrt(2) lambda
        assert 4 * h_pq == pytest.approx(2 * math.sqrt(2) * lambda_term(Gaussian1D(mp_, sp), Gaussian1D(mq, sq)), rel=1e-14)


# -- closed form -------------------------------------------------------------

def test_identical_is_zero():
    g = Gaussian1D(0, 1)
    assert psi_closed_form(g, g).psi == 0.0


def test_unit_shift_value():
    p, q = Gaussian1D(0, 1), Gaussian1D(1, 1)
    rep = psi_closed_form(p, q)
    assert rep.valid
    assert rep.psi == pytest.approx(PSI_UNIT_SHIFT, rel=1e-14)
    numerator = (2 / SQRT_PI) * (1 - math.exp(-0.25))
    denominator = (1 - 1 / (2 * SQRT_PI)) ** 2
    assert numerator == pytest.approx(0.24959658816006777, rel=1e-14)
    assert denominator == pytest.approx(0.5153878879981915, rel=1e-14)
    assert rep.psi == pytest.approx(numerator / denominator, rel=1e-14)
    assert rep.psi == pytest.approx(oracle_psi_1d(p, q), rel=1e-9)


@pytest.mark.parametrize("p, q, expected", [
    (Gaussian1D(0, 0.3), Gaussian1D(0, 0.4), PSI_NARROW),
    (Gaussian1D(0, 1), Gaussian1D(0, 2), PSI_SCALE_1_2),
])
def test_reference_values(p, q, expected):
    assert psi(p, q) == pytest.approx(expected, rel=1e-13)


def test_invalid_sigma():
    with pytest.raises(InvalidNorm):
        psi_closed_form(Gaussian1D(0, 0.2), Gaussian1D(0, 1))
    rep = psi_closed_form(Gaussian1D(0, 0.2), Gaussian1D(0, 1), strict=False)
    assert not rep.valid and rep.psi is None
    assert rep.l2_norm_sq_p > 1.0


def test_matches_literal_formula():
    rng = np.random.default_rng(12)
    for _ in range(500):
        p = Gaussian1D(rng.uniform(-3, 3), rng.uniform(0.3, 5))
        q = Gaussian1D(rng.uniform(-3, 3), rng.uniform(0.3, 5))
        assert psi(p, q) == pytest.approx(literal_psi(p, q), rel=1e-10, abs=1e-14)


@pytest.mark.parametrize("mp_", [-3, 0, 3])
@pytest.mark.parametrize("mq", [-1, 1])
@pytest.mark.parametrize("sp", [0.3, 1, 5])
@pytest.mark.parametrize("sq", [0.5, 2])
def test_oracle_equivalence(mp_, mq, sp, sq):
    p, q = Gaussian1D(mp_, sp), Gaussian1D(mq, sq)
    assert psi(p, q) == pytest.approx(oracle_psi_1d(p, q), rel=1e-9)


@given(valid_gaussians, valid_gaussians)
def test_symmetric_and_nonnegative(p, q):
    a, b = psi(p, q), psi(q, p)
    assert a == b
    assert a >= 0.0
    assert (a == 0.0) == (p == q)


def test_small_differences_stay_positive():
    base = Gaussian1D(0.0, 1.0)
    for other in (Gaussian1D(1e-8, 1.0), Gaussian1D(0.0, 1.0 + 1e-9)):
        assert psi(base, other) > 0.0


# -- psi from raw integrals --------------------------------------------------

def test_from_integrals_examples():
    assert psi_from_integrals(0.3, 0.3, 0.3) == 0.0
    assert psi_from_integrals(0.5, 0.5, 0.0) == pytest.approx(8.0, rel=1e-15)
    p, q = Gaussian1D(0, 1), Gaussian1D(1, 1)
    value = psi_from_integrals(oracle_l2_norm_squared(p), oracle_l2_norm_squared(q), oracle_overlap(p, q))
    assert value == pytest.approx(psi(p, q), rel=1e-9)


def test_from_integrals_errors():
    with pytest.raises(InvalidNorm):
        psi_from_integrals(1.0, 0.5, 0.1)
    with pytest.raises(CauchySchwarzViolation):
        psi_from_integrals(0.1, 0.1, 0.2)


# -- Brownian motions --------------------------------------------------------

def test_brownian_threshold():
    bp = BrownianPair(0.0, 1.0, 0.0, 1.0)
    assert brownian_t_min(bp) == pytest.approx(1 / (4 * math.pi), rel=1e-15)
    assert brownian_t_min(bp) == pytest.approx(0.0795775, abs=1e-7)
    with pytest.raises(BelowValidityTime) as info:
        brownian_psi(bp, 0.05)
    assert info.value.t_min == brownian_t_min(bp)
    with pytest.raises(BelowValidityTime):
        brownian_psi(bp, brownian_t_min(bp))


def test_brownian_identical_laws():
    bp = BrownianPair(0.7, 1.3, 0.7, 1.3)
    for t in (0.1, 1.0, 10.0, 1e4):
        assert brownian_psi(bp, t) == 0.0


def test_brownian_unit_time():
    bp = BrownianPair(0.0, 1.0, 0.0, 2.0)
    assert brownian_psi(bp, 1.0) == pytest.approx(psi(Gaussian1D(0, 1), Gaussian1D(0, 2)), rel=1e-15)
    assert brownian_psi(bp, 1.0) == pytest.approx(PSI_SCALE_1_2, rel=1e-13)


def test_brownian_against_literal_and_substitution():
    rng = np.random.default_rng(13)
    for _ in range(100):
        bp = BrownianPair(rng.uniform(-2, 2), rng.uniform(0.2, 3), rng.uniform(-2, 2), rng.uniform(0.2, 3))
        t = brownian_t_min(bp) + rng.uniform(0.05, 5)
        value = brownian_psi(bp, t)
        rt = math.sqrt(t)
        scaled = psi(Gaussian1D(t * bp.drift_p, rt * bp.vol_p), Gaussian1D(t * bp.drift_q, rt * bp.vol_q))
        assert value == pytest.approx(scaled, rel=1e-12)
        assert value == pytest.approx(literal_brownian(bp, t), rel=1e-9)
        p, q = bp.at(t)
        assert brownian_lambda(bp, t) == pytest.approx(lambda_term(p, q), rel=1e-13)


def test_brownian_trajectory():
    bp = BrownianPair(0.0, 1.0, 0.5, 1.0)
    traj = brownian_trajectory(bp, [0.1, 0.5, 2.0])
    assert traj.t_min == brownian_t_min(bp)
    assert traj.values == tuple(brownian_psi(bp, t) for t in traj.times)
    with pytest.raises(InvalidParameter):
        brownian_trajectory(bp, [1.0, 0.5])
    with pytest.raises(InvalidParameter):
        BrownianPair(0, 0, 0, 1)


# -- limits ------------------------------------------------------------------

def test_limit_value():
    assert psi_limit_sigma(Gaussian1D(0, 1)) == pytest.approx(2 * SQRT_PI / (2 * math.pi - SQRT_PI), rel=1e-15)
    assert psi_limit_sigma(Gaussian1D(0, 1)) == pytest.approx(0.7858831181094467, rel=1e-14)
    with pytest.raises(InvalidNorm):
        psi_limit_sigma(Gaussian1D(0, 0.25))


@pytest.mark.parametrize("mu_q", [0.0, 10.0, 1e3])
def test_limit_convergence(mu_q):
    gap = abs(psi(Gaussian1D(0, 1), Gaussian1D(mu_q, 1e6)) - psi_limit_sigma(Gaussian1D(0, 1)))
    assert gap <= 1e-5


def test_double_limit():
    assert psi(Gaussian1D(0, 1e6), Gaussian1D(5, 1e6)) <= 1e-5


def test_validity_boundary():
    q = Gaussian1D(1.0, 1.0)
    with pytest.raises(InvalidNorm):
        psi(Gaussian1D(0.0, SIGMA_MIN - 1e-9), q)
    value = psi(Gaussian1D(0.0, SIGMA_MIN + 1e-9), q)
    assert math.isfinite(value) and value > 1e6
