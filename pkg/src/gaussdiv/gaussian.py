"""Univariate and multivariate Gaussian measures and their densities."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_solve, solve_triangular

from .errors import DimensionMismatch, InvalidParameter

LOG_2PI = math.log(2.0 * math.pi)
SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class Gaussian1D:
    """N(mu, sigma**2) on the real line. ``sigma`` is the standard deviation."""

    mu: float
    sigma: float

    def __post_init__(self):
        mu, sigma = float(self.mu), float(self.sigma)
        if not math.isfinite(mu):
            raise InvalidParameter(f"mu must be finite, got {self.mu!r}")
        if not math.isfinite(sigma) or sigma <= 0.0:
            raise InvalidParameter(f"sigma must be finite and > 0, got {self.sigma!r}")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "sigma", sigma)

    @property
    def var(self) -> float:
        return self.sigma * self.sigma


def pdf_1d(g: Gaussian1D, x):
    """Density of ``g`` at ``x``. Accepts scalars or arrays."""
    z = (np.asarray(x, dtype=float) - g.mu) / g.sigma
    out = np.exp(-0.5 * z * z) / (g.sigma * math.sqrt(2.0 * math.pi))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True, eq=False)
class GaussianND:
    """N(mu, sigma) on R^n with a cached lower Cholesky factor of ``sigma``.

    ``sigma`` must be symmetric to within 1e-12 (max abs entry of A - A^T);
    it is symmetrized before factorization. Arrays are stored read-only.
    """

    mu: np.ndarray
    sigma: np.ndarray
    chol: np.ndarray = field(init=False, repr=False)
    logdet: float = field(init=False, repr=False)

    def __post_init__(self):
        mu = np.array(self.mu, dtype=float).reshape(-1)
        sigma = np.array(self.sigma, dtype=float)
        n = mu.shape[0]
        if n == 0:
            raise InvalidParameter("dimension must be positive")
        if sigma.ndim == 0 and n == 1:
            sigma = sigma.reshape(1, 1)
        if sigma.shape != (n, n):
            raise DimensionMismatch(f"covariance shape {sigma.shape} does not match mean length {n}")
        if not (np.all(np.isfinite(mu)) and np.all(np.isfinite(sigma))):
            raise InvalidParameter("mean and covariance entries must be finite")
        asym = float(np.max(np.abs(sigma - sigma.T)))
        if asym > SYMMETRY_TOL:
            raise InvalidParameter(f"covariance is not symmetric (max asymmetry {asym:.3e})")
        sigma = 0.5 * (sigma + sigma.T)
        try:
            chol = np.linalg.cholesky(sigma)
        except np.linalg.LinAlgError as exc:
            raise InvalidParameter("covariance is not positive definite") from exc
        diag = np.diag(chol)
        if not np.all(diag > 0.0):
            raise InvalidParameter("covariance is not positive definite")
        for arr in (mu, sigma, chol):
            arr.setflags(write=False)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "chol", chol)
        object.__setattr__(self, "logdet", float(2.0 * np.sum(np.log(diag))))

    @property
    def n(self) -> int:
        return self.mu.shape[0]

    @classmethod
    def from_1d(cls, g: Gaussian1D) -> GaussianND:
        return cls([g.mu], [[g.var]])

    def solve(self, b: np.ndarray) -> np.ndarray:
        """Sigma^{-1} b via the cached factor."""
        return cho_solve((self.chol, True), b)

    def precision(self) -> np.ndarray:
        return self.solve(np.eye(self.n))

    def __repr__(self):
        return f"GaussianND(mu={self.mu.tolist()!r}, sigma={self.sigma.tolist()!r})"


def _as_points(g: GaussianND, x) -> tuple[np.ndarray, bool]:
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    pts = x.reshape(1, -1) if single else x
    if pts.ndim != 2 or pts.shape[1] != g.n:
        raise DimensionMismatch(f"expected points of length {g.n}, got shape {x.shape}")
    return pts, single


def logpdf_nd(g: GaussianND, x):
    pts, single = _as_points(g, x)
    # whitened residuals L^{-1}(x - mu)
    w = solve_triangular(g.chol, (pts - g.mu).T, lower=True)
    out = -0.5 * (g.n * LOG_2PI + g.logdet + np.sum(w * w, axis=0))
    return float(out[0]) if single else out


def pdf_nd(g: GaussianND, x):
    """Density at a point of length n, or at each row of an (m, n) array."""
    out = np.exp(logpdf_nd(g, x))
    return float(out) if np.ndim(out) == 0 else out


def natural_params(g: GaussianND) -> tuple[np.ndarray, float]:
    """Return ``(muhat, Lambda)`` with muhat = Sigma^{-1} mu and

    Lambda = -1/2 (n log 2pi - log|Sigma^{-1}| + muhat^T Sigma muhat),

    so that the density is exp(Lambda + muhat^T x - x^T Sigma^{-1} x / 2).
    """
    muhat = g.solve(g.mu)
    quad = float(muhat @ g.sigma @ muhat)
    lam = -0.5 * (g.n * LOG_2PI + g.logdet + quad)
    return muhat, lam


def pdf_natural(g: GaussianND, x):
    """Density evaluated through the natural-parameter form."""
    pts, single = _as_points(g, x)
    muhat, lam = natural_params(g)
    prec_x = g.solve(pts.T)
    expo = lam + pts @ muhat - 0.5 * np.sum(pts.T * prec_x, axis=0)
    out = np.exp(expo)
    return float(out[0]) if single else out
