"""Fisher-Rao geometry of univariate Gaussians and its half-plane / disc models.

The Gaussian manifold with the Fisher metric has curvature -1/2. Rescaling
lengths by 1/sqrt(2) gives the upper half-plane W (curvature -1), embedded
here as z = mu/sqrt(2) + i*sigma. A Mobius map sends W onto the unit disc D,
where distances and the invariant

    Psi(x, y) = 2|x - y|^2 / ((1 - |x|^2)(1 - |y|^2)) = cosh(d_D(x, y)) - 1

are computed. Curvatures (+1 sphere, -1/2 Gaussian manifold, -1 for W and D)
are fixed constants, not computed.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .errors import InvalidParameter, NumericalOverflow
from .gaussian import Gaussian1D

SQRT2 = math.sqrt(2.0)
ZETA_CLAMP = 1.0 - 1e-15
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class HalfPlanePoint:
    z: complex

    def __post_init__(self):
        z = complex(self.z)
        if not (cmath.isfinite(z) and z.imag > 0.0):
            raise InvalidParameter(f"half-plane point needs finite z with Im(z) > 0, got {self.z!r}")
        object.__setattr__(self, "z", z)


@dataclass(frozen=True)
class DiscPoint:
    z: complex

    def __post_init__(self):
        z = complex(self.z)
        if not (cmath.isfinite(z) and abs(z) < 1.0):
            raise InvalidParameter(f"disc point needs |z| < 1, got {self.z!r}")
        object.__setattr__(self, "z", z)


@dataclass(frozen=True)
class MobiusMap:
    """z -> e^{i theta} (z - kappa) / (z - conj(kappa)), sending kappa to 0."""

    kappa: HalfPlanePoint = field(default_factory=lambda: HalfPlanePoint(1j))
    theta: float = 0.0

    def __post_init__(self):
        if not isinstance(self.kappa, HalfPlanePoint):
            object.__setattr__(self, "kappa", HalfPlanePoint(self.kappa))
        theta = float(self.theta)
        if not math.isfinite(theta):
            raise InvalidParameter("theta must be finite")
        object.__setattr__(self, "theta", math.fmod(theta, TWO_PI) % TWO_PI)


@dataclass(frozen=True)
class DiscAutomorphism:
    """z -> e^{i phi} (w - a) / (1 - conj(a) w) with w = conj(z) if ``reflect`` else z.

    ``reflect`` composes with complex conjugation, which also preserves D,
    so the anti-holomorphic half of Mob(D) is covered as well.
    """

    a: DiscPoint = field(default_factory=lambda: DiscPoint(0j))
    phi: float = 0.0
    reflect: bool = False

    def __post_init__(self):
        if not isinstance(self.a, DiscPoint):
            object.__setattr__(self, "a", DiscPoint(self.a))
        if not math.isfinite(float(self.phi)):
            raise InvalidParameter("phi must be finite")
        object.__setattr__(self, "phi", float(self.phi))

    def inverse(self) -> DiscAutomorphism:
        rot = cmath.exp(1j * self.phi)
        if not self.reflect:
            return DiscAutomorphism(DiscPoint(-self.a.z * rot), -self.phi)
        # (M o C)^{-1} = C o M^{-1} = M' o C with M' the conjugated coefficients
        inv_a = (-self.a.z * rot).conjugate()
        return DiscAutomorphism(DiscPoint(inv_a), self.phi, reflect=True)


# -- Fisher-Rao / half-plane distances ---------------------------------------

def fisher_rao_zeta(p: Gaussian1D, q: Gaussian1D) -> float:
    """sqrt((dmu^2 + 2 (sq - sp)^2) / (dmu^2 + 2 (sq + sp)^2)), in [0, 1)."""
    dm = q.mu - p.mu
    # hypot keeps tiny separations from underflowing to zero
    return math.hypot(dm, SQRT2 * (q.sigma - p.sigma)) / math.hypot(dm, SQRT2 * (q.sigma + p.sigma))


def _two_atanh(zeta: float) -> float:
    return 2.0 * math.atanh(min(zeta, ZETA_CLAMP))


def is_near_boundary(p: Gaussian1D, q: Gaussian1D) -> bool:
    """True when zeta rounds into the clamp zone below 1."""
    return fisher_rao_zeta(p, q) > ZETA_CLAMP


def half_plane_distance(p: Gaussian1D, q: Gaussian1D) -> float:
    """2 atanh(zeta): the Fisher-Rao distance measured in curvature -1 units."""
    return _two_atanh(fisher_rao_zeta(p, q))


def fisher_rao_distance(p: Gaussian1D, q: Gaussian1D) -> float:
    """2 sqrt(2) atanh(zeta).

    Also used where the means or the standard deviations coincide; the
    formula is continuous there (equal means gives sqrt(2) |log(sq/sp)|).
    """
    return SQRT2 * half_plane_distance(p, q)


def embed_half_plane(p: Gaussian1D) -> HalfPlanePoint:
    return HalfPlanePoint(complex(p.mu / SQRT2, p.sigma))


def half_plane_point_distance(z1: HalfPlanePoint, z2: HalfPlanePoint) -> float:
    rho = abs(z1.z - z2.z) / abs(z1.z - z2.z.conjugate())
    return _two_atanh(rho)


# -- Poincare disc -----------------------------------------------------------

def to_disc(m: MobiusMap, z: HalfPlanePoint) -> DiscPoint:
    den = z.z - m.kappa.z.conjugate()
    if abs(den) == 0.0 or not cmath.isfinite(den):
        raise NumericalOverflow(f"|z - conj(kappa)| underflowed for z={z.z!r}, kappa={m.kappa.z!r}")
    w = cmath.exp(1j * m.theta) * (z.z - m.kappa.z) / den
    if abs(w) >= 1.0:
        # only reachable through rounding for points extremely far from kappa
        raise NumericalOverflow(f"image of {z.z!r} rounded onto the unit circle")
    return DiscPoint(w)


def _one_minus_abs2(z: complex) -> float:
    r = abs(z)
    return (1.0 - r) * (1.0 + r)


def disc_distance(x: DiscPoint, y: DiscPoint) -> float:
    """2 atanh(|x - y| / |1 - conj(x) y|).

    Evaluated as log((1 + rho)^2 / (1 - rho^2)) with
    1 - rho^2 = (1 - |x|^2)(1 - |y|^2) / |1 - conj(x) y|^2, which keeps full
    precision for points near the boundary.
    """
    cross = 1.0 - x.z.conjugate() * y.z
    cross_abs = abs(cross)
    rho = abs(x.z - y.z) / cross_abs
    if rho == 0.0:
        return 0.0
    one_minus_rho2 = _one_minus_abs2(x.z) * _one_minus_abs2(y.z) / (cross_abs * cross_abs)
    return max(2.0 * math.log1p(rho) - math.log(one_minus_rho2), 0.0)


def psi_geometric(x: DiscPoint, y: DiscPoint) -> float:
    d = x.z - y.z
    return 2.0 * (d.real * d.real + d.imag * d.imag) / (_one_minus_abs2(x.z) * _one_minus_abs2(y.z))


def apply_disc_automorphism(a: DiscAutomorphism, z: DiscPoint) -> DiscPoint:
    w = z.z.conjugate() if a.reflect else z.z
    out = cmath.exp(1j * a.phi) * (w - a.a.z) / (1.0 - a.a.z.conjugate() * w)
    if abs(out) >= 1.0:
        # rounding can land an image of a near-boundary point on the circle
        out = out / abs(out) * math.nextafter(1.0, 0.0)
    return DiscPoint(out)
