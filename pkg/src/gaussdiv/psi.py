"""Closed-form L2-embedded hyperbolic invariant for univariate Gaussians.

Treating densities p, q as points of L2 with squared norms below one, the
disc invariant becomes

    Psi(P, Q) = 2 ||p - q||^2 / ((1 - ||p||^2)(1 - ||q||^2)).

For Gaussians every integral is elementary:

    ||p||^2 = 1 / (2 sp sqrt(pi)),    4 <p, q> = 2 sqrt(2) lambda,
    lambda = exp(-(mp - mq)^2 / (2 s)) / sqrt(pi s),   s = sp^2 + sq^2,

so Psi is finite and non-negative exactly when both sigmas exceed
1 / (2 sqrt(pi)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import BelowValidityTime, CauchySchwarzViolation, DegenerateDenominator, InvalidNorm, InvalidParameter
from .gaussian import Gaussian1D

SQRT_PI = math.sqrt(math.pi)
SQRT2 = math.sqrt(2.0)
SIGMA_MIN = 1.0 / (2.0 * SQRT_PI)
CS_TOL = 1e-12
DENOM_EPS = 1e-300


@dataclass(frozen=True)
class PsiReport:
    psi: Optional[float]
    l2_norm_sq_p: float
    l2_norm_sq_q: float
    lambda_: float
    valid: bool


def l2_norm_squared(g: Gaussian1D) -> float:
    return 1.0 / (2.0 * g.sigma * SQRT_PI)


def is_valid_sigma(sigma: float) -> bool:
    return sigma > SIGMA_MIN


def lambda_term(p: Gaussian1D, q: Gaussian1D) -> float:
    s = p.var + q.var
    d = p.mu - q.mu
    return math.exp(-d * d / (2.0 * s)) / math.sqrt(math.pi * s)


def _numerator(dmu: float, sp: float, sq: float) -> float:
    """(sp sqrt(pi))^-1 - 2 sqrt(2) lambda + (sq sqrt(pi))^-1, cancellation-free.

    Split as [1/sp + 1/sq - 2 sqrt(2/s)] + 2 sqrt(2/s) (1 - exp(-dmu^2 / 2s)),
    and the first bracket equals
    (sp - sq)^2 (sp^2 + 4 sp sq + sq^2) / (sp sq sqrt(s) (sqrt(s)(sp + sq) + 2 sqrt(2) sp sq)).
    Both parts are >= 0 and vanish only at equal parameters.
    """
    s = sp * sp + sq * sq
    rs = math.sqrt(s)
    ds = sp - sq
    scale_part = ds * ds * (sp * sp + 4.0 * sp * sq + sq * sq) / (
        sp * sq * rs * (rs * (sp + sq) + 2.0 * SQRT2 * sp * sq)
    )
    mean_part = -2.0 * SQRT2 * math.expm1(-dmu * dmu / (2.0 * s)) / rs
    return (scale_part + mean_part) / SQRT_PI


def _denominator_factor(sigma: float) -> float:
    f = 1.0 - 1.0 / (2.0 * sigma * SQRT_PI)
    if abs(f) <= DENOM_EPS:
        raise DegenerateDenominator(f"1 - ||p||^2 vanishes at sigma={sigma!r}")
    return f


def _psi(dmu: float, sp: float, sq: float) -> float:
    for s in (sp, sq):
        if not is_valid_sigma(s):
            raise InvalidNorm(f"sigma={s!r} must exceed 1/(2 sqrt(pi)) = {SIGMA_MIN!r}")
    # fixed argument order makes Psi(P, Q) == Psi(Q, P) bit for bit
    sp, sq = min(sp, sq), max(sp, sq)
    return _numerator(abs(dmu), sp, sq) / (_denominator_factor(sp) * _denominator_factor(sq))


def psi_closed_form(p: Gaussian1D, q: Gaussian1D, *, strict: bool = True) -> PsiReport:
    """Closed-form Psi(P, Q) with its intermediate terms.

    With ``strict`` (default) an invalid sigma raises :class:`InvalidNorm`;
    otherwise a report with ``valid=False`` and ``psi=None`` comes back.
    """
    norm_p, norm_q = l2_norm_squared(p), l2_norm_squared(q)
    lam = lambda_term(p, q)
    try:
        psi = _psi(p.mu - q.mu, p.sigma, q.sigma)
    except InvalidNorm:
        if strict:
            raise
        return PsiReport(None, norm_p, norm_q, lam, False)
    return PsiReport(psi, norm_p, norm_q, lam, True)


def psi(p: Gaussian1D, q: Gaussian1D) -> float:
    return _psi(p.mu - q.mu, p.sigma, q.sigma)


def psi_from_integrals(int_p2: float, int_q2: float, int_pq: float) -> float:
    """Assemble Psi from the three raw integrals of p^2, q^2 and p q."""
    if int_p2 >= 1.0 or int_q2 >= 1.0:
        raise InvalidNorm(f"squared norms must be < 1, got {int_p2!r}, {int_q2!r}")
    if int_pq * int_pq > int_p2 * int_q2 + CS_TOL:
        raise CauchySchwarzViolation(f"int_pq^2={int_pq * int_pq!r} exceeds int_p2*int_q2={int_p2 * int_q2!r}")
    num = max((int_p2 - int_pq) + (int_q2 - int_pq), 0.0)
    return 2.0 * num / ((1.0 - int_p2) * (1.0 - int_q2))


def psi_limit_sigma(fixed: Gaussian1D) -> float:
    """Limit of Psi as the other measure's sigma grows without bound (any means)."""
    s = fixed.sigma
    if not is_valid_sigma(s):
        raise InvalidNorm(f"sigma={s!r} must exceed 1/(2 sqrt(pi))")
    return 2.0 * s * SQRT_PI / (2.0 * s * s * math.pi - s * SQRT_PI)


# -- Brownian motions --------------------------------------------------------

@dataclass(frozen=True)
class BrownianPair:
    """Two Brownian motions with W_t ~ N(t * drift, t * vol^2)."""

    drift_p: float
    vol_p: float
    drift_q: float
    vol_q: float

    def __post_init__(self):
        for name in ("drift_p", "vol_p", "drift_q", "vol_q"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise InvalidParameter(f"{name} must be finite")
            object.__setattr__(self, name, v)
        if self.vol_p <= 0.0 or self.vol_q <= 0.0:
            raise InvalidParameter("volatilities must be > 0")

    def at(self, t: float) -> tuple[Gaussian1D, Gaussian1D]:
        """Marginal laws at time t."""
        rt = math.sqrt(t)
        return Gaussian1D(t * self.drift_p, rt * self.vol_p), Gaussian1D(t * self.drift_q, rt * self.vol_q)


@dataclass(frozen=True)
class PsiTrajectory:
    times: tuple[float, ...]
    values: tuple[float, ...]
    t_min: float


def brownian_t_min(bp: BrownianPair) -> float:
    return max(1.0 / (4.0 * bp.vol_p**2 * math.pi), 1.0 / (4.0 * bp.vol_q**2 * math.pi))


def brownian_lambda(bp: BrownianPair, t: float) -> float:
    s = bp.vol_p**2 + bp.vol_q**2
    d = bp.drift_p - bp.drift_q
    return math.exp(-t * d * d / (2.0 * s)) / math.sqrt(t * math.pi * s)


def brownian_psi(bp: BrownianPair, t: float) -> float:
    """Psi between the time-t marginals; requires t strictly above ``brownian_t_min``."""
    t = float(t)
    t_min = brownian_t_min(bp)
    if not t > t_min:
        raise BelowValidityTime(t, t_min)
    rt = math.sqrt(t)
    try:
        return _psi(t * (bp.drift_p - bp.drift_q), rt * bp.vol_p, rt * bp.vol_q)
    except (InvalidNorm, DegenerateDenominator) as exc:
        # t within rounding of t_min
        raise BelowValidityTime(t, t_min) from exc


def brownian_trajectory(bp: BrownianPair, times: Sequence[float]) -> PsiTrajectory:
    ts = tuple(float(t) for t in times)
    if any(b <= a for a, b in zip(ts, ts[1:])):
        raise InvalidParameter("times must be strictly increasing")
    return PsiTrajectory(ts, tuple(brownian_psi(bp, t) for t in ts), brownian_t_min(bp))
