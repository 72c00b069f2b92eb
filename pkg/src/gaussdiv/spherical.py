"""Spherical-side divergences between univariate Gaussians.

The square-root densities sit on the positive orthant of the unit sphere in
L2; the Bhattacharyya coefficient is the cosine of the great-circle angle
between them and the squared Hellinger distance is one minus that cosine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .gaussian import Gaussian1D


@dataclass(frozen=True)
class SphericalReport:
    bc: float
    angle: float
    hellinger_sq: float


def _log_bc(p: Gaussian1D, q: Gaussian1D) -> float:
    # log sqrt(2 sp sq / s) == 0.5 * log1p(-(sp - sq)^2 / s); exact zero when p == q
    s = p.var + q.var
    ds = p.sigma - q.sigma
    d = p.mu - q.mu
    return 0.5 * math.log1p(-ds * ds / s) - d * d / (4.0 * s)


def bhattacharyya_coefficient(p: Gaussian1D, q: Gaussian1D) -> float:
    """Integral of sqrt(p q) over the real line,

    sqrt(2 sp sq / (sp^2 + sq^2)) * exp(-(mp - mq)^2 / (4 (sp^2 + sq^2))).
    """
    return math.exp(_log_bc(p, q))


def hellinger_squared(p: Gaussian1D, q: Gaussian1D) -> float:
    """1 - bc, evaluated with expm1 so near-identical pairs keep precision."""
    return min(max(-math.expm1(_log_bc(p, q)), 0.0), 1.0)


def _angle(bc: float, phi: float) -> float:
    # arccos(bc); near bc = 1 use the half-angle form 2 asin(sqrt(phi / 2)) instead
    if bc < 0.5:
        return math.acos(bc)
    return 2.0 * math.asin(math.sqrt(0.5 * phi))


def bhattacharyya_angle(p: Gaussian1D, q: Gaussian1D) -> float:
    log_bc = _log_bc(p, q)
    return _angle(math.exp(log_bc), min(max(-math.expm1(log_bc), 0.0), 1.0))


def spherical_report(p: Gaussian1D, q: Gaussian1D) -> SphericalReport:
    log_bc = _log_bc(p, q)
    phi = min(max(-math.expm1(log_bc), 0.0), 1.0)
    bc = math.exp(log_bc)
    return SphericalReport(bc=bc, angle=_angle(bc, phi), hellinger_sq=phi)
