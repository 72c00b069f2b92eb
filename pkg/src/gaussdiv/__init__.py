"""Divergences between Gaussian measures on spherical and hyperbolic geometries.

Spherical side: Bhattacharyya coefficient, Bhattacharyya angle and squared
Hellinger distance. Hyperbolic side: Fisher-Rao distance, the half-plane and
Poincare-disc models linked by Mobius maps, and the disc invariant
Psi = cosh(d_D) - 1. The L2-embedded Psi between Gaussian densities has a
closed form (univariate and multivariate), and every closed form here has a
numerical-integration oracle in :mod:`gaussdiv.oracle`.
"""

from .errors import (
    BelowValidityTime,
    CauchySchwarzViolation,
    DegenerateDenominator,
    DimensionMismatch,
    DimensionTooLarge,
    FactorizationFailure,
    GaussDivError,
    InvalidNorm,
    InvalidParameter,
    MaxDepthExceeded,
    NumericalOverflow,
)
from .gaussian import Gaussian1D, GaussianND, natural_params, pdf_1d, pdf_nd
from .hyperbolic import (
    DiscAutomorphism,
    DiscPoint,
    HalfPlanePoint,
    MobiusMap,
    apply_disc_automorphism,
    disc_distance,
    embed_half_plane,
    fisher_rao_distance,
    fisher_rao_zeta,
    half_plane_distance,
    psi_geometric,
    to_disc,
)
from .multivariate import ProductTerms, lambda_combined, product_integrals, psi_multivariate
from .psi import (
    BrownianPair,
    PsiReport,
    PsiTrajectory,
    brownian_psi,
    brownian_t_min,
    brownian_trajectory,
    l2_norm_squared,
    lambda_term,
    psi_closed_form,
    psi_from_integrals,
    psi_limit_sigma,
)
from .report import DivergenceReport, divergence_report
from .spherical import SphericalReport, bhattacharyya_angle, bhattacharyya_coefficient, hellinger_squared, spherical_report

__version__ = "0.1.0"
