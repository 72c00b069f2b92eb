"""All divergences for one pair of univariate Gaussians in a single record."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import GaussDivError
from .gaussian import Gaussian1D
from .hyperbolic import (
    MobiusMap,
    disc_distance,
    embed_half_plane,
    fisher_rao_zeta,
    half_plane_distance,
    is_near_boundary,
    psi_geometric,
    to_disc,
    SQRT2,
)
from .psi import psi_closed_form
from .spherical import spherical_report


@dataclass(frozen=True)
class DivergenceReport:
    bc: float
    hellinger_sq: float
    bhattacharyya_angle: float
    zeta: float
    fisher_rao: float
    half_plane: float
    disc: float
    psi_geometric: float
    psi: Optional[float]
    psi_valid: bool
    psi_error: Optional[str]
    near_boundary: bool


def divergence_report(p: Gaussian1D, q: Gaussian1D, mobius: Optional[MobiusMap] = None) -> DivergenceReport:
    """Spherical, Fisher-Rao, disc and L2-embedded Psi quantities for (p, q).

    The disc quantities use ``mobius`` (default kappa = i, theta = 0); their
    values do not depend on that choice.
    """
    m = mobius or MobiusMap()
    sph = spherical_report(p, q)
    x, y = to_disc(m, embed_half_plane(p)), to_disc(m, embed_half_plane(q))
    d_w = half_plane_distance(p, q)
    psi_value, psi_error = None, None
    try:
        psi_value = psi_closed_form(p, q).psi
    except GaussDivError as exc:
        psi_error = exc.code
    return DivergenceReport(
        bc=sph.bc,
        hellinger_sq=sph.hellinger_sq,
        bhattacharyya_angle=sph.angle,
        zeta=fisher_rao_zeta(p, q),
        fisher_rao=SQRT2 * d_w,
        half_plane=d_w,
        disc=disc_distance(x, y),
        psi_geometric=psi_geometric(x, y),
        psi=psi_value,
        psi_valid=psi_error is None,
        psi_error=psi_error,
        near_boundary=is_near_boundary(p, q),
    )
