"""Brute-force numerical integration used to check the closed forms.

Nothing in here calls the closed-form code: the oracles only evaluate
densities and integrate them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from numpy.polynomial.hermite import hermgauss

from .errors import DimensionMismatch, DimensionTooLarge, InvalidNorm, InvalidParameter, MaxDepthExceeded
from .gaussian import Gaussian1D, GaussianND, pdf_1d, pdf_nd


@dataclass(frozen=True)
class QuadratureSettings:
    abs_tol: float = 1e-12
    max_depth: int = 60
    support_halfwidth: float = 12.0  # in units of the largest sigma

    def __post_init__(self):
        if not self.abs_tol > 0.0:
            raise InvalidParameter("abs_tol must be > 0")
        if self.max_depth < 10:
            raise InvalidParameter("max_depth must be >= 10")
        if not self.support_halfwidth > 0.0:
            raise InvalidParameter("support_halfwidth must be > 0")


@dataclass(frozen=True)
class MonteCarloSettings:
    samples: int = 10_000_000
    seed: int = 20240101
    chunk: int = field(default=1_000_000, repr=False)

    def __post_init__(self):
        if self.samples < 10_000:
            raise InvalidParameter("samples must be >= 10^4")
        if not 0 <= self.seed < 2**64:
            raise InvalidParameter("seed must fit in 64 bits")


def integrate_1d(
    f: Callable[[np.ndarray], np.ndarray],
    support: tuple[float, float],
    settings: Optional[QuadratureSettings] = None,
    initial_panels: int = 1,
) -> float:
    """Adaptive Simpson quadrature of a vectorized integrand over ``support``.

    Panels are refined breadth-first: every level evaluates all new nodes in
    one call to ``f``. A panel [l, r] is accepted once the two-halves Simpson
    estimate differs from the whole-panel estimate by at most
    15 * abs_tol * (r - l) / (b - a); accepted panels contribute the
    Richardson-corrected value. ``initial_panels`` seeds a uniform partition
    so narrow peaks are not missed by the first few nodes.
    """
    s = settings or QuadratureSettings()
    a, b = float(support[0]), float(support[1])
    if not b > a:
        raise InvalidParameter(f"empty support [{a}, {b}]")
    width = b - a
    edges = np.linspace(a, b, int(initial_panels) + 1)
    left, right = edges[:-1], edges[1:]
    mid = 0.5 * (left + right)
    vals = f(np.concatenate([left, mid, right[-1:]]))
    k = left.size
    fl, fm = vals[:k], vals[k:2 * k]
    fr = np.concatenate([fl[1:], vals[2 * k:]])
    whole = (right - left) / 6.0 * (fl + 4.0 * fm + fr)

    accepted: list[np.ndarray] = []
    depth = 0
    while left.size:
        lm = 0.5 * (left + mid)
        rm = 0.5 * (mid + right)
        fv = f(np.concatenate([lm, rm]))
        flm, frm = fv[:left.size], fv[left.size:]
        h = right - left
        # true child widths: rounded midpoints make them differ from h / 2
        s_left = (mid - left) / 6.0 * (fl + 4.0 * flm + fm)
        s_right = (right - mid) / 6.0 * (fm + 4.0 * frm + fr)
        halves = s_left + s_right
        err = halves - whole
        ok = np.abs(err) <= 15.0 * s.abs_tol * h / width
        accepted.append(halves[ok] + err[ok] / 15.0)
        if depth >= s.max_depth and not np.all(ok):
            partial = math.fsum(np.concatenate(accepted + [halves[~ok]]))
            raise MaxDepthExceeded(partial, s.max_depth)
        go = ~ok
        left, mid, right = (
            np.concatenate([left[go], mid[go]]),
            np.concatenate([lm[go], rm[go]]),
            np.concatenate([mid[go], right[go]]),
        )
        fl, fm, fr = (
            np.concatenate([fl[go], fm[go]]),
            np.concatenate([flm[go], frm[go]]),
            np.concatenate([fm[go], fr[go]]),
        )
        whole = np.concatenate([s_left[go], s_right[go]])
        depth += 1
    return math.fsum(np.concatenate(accepted))


def gaussian_support(
    gs: tuple[Gaussian1D, ...], settings: Optional[QuadratureSettings] = None
) -> tuple[float, float]:
    """[min mu - k max sigma, max mu + k max sigma] with k = support_halfwidth."""
    k = (settings or QuadratureSettings()).support_halfwidth
    smax = max(g.sigma for g in gs)
    return min(g.mu for g in gs) - k * smax, max(g.mu for g in gs) + k * smax


def _integrate_gaussians(f, gs, settings):
    lo, hi = gaussian_support(gs, settings)
    # at least two panels per smallest sigma
    panels = max(16, math.ceil(2.0 * (hi - lo) / min(g.sigma for g in gs)))
    return integrate_1d(f, (lo, hi), settings, initial_panels=panels)


def oracle_l2_norm_squared(p: Gaussian1D, settings: Optional[QuadratureSettings] = None) -> float:
    return _integrate_gaussians(lambda x: pdf_1d(p, x) ** 2, (p,), settings)


def oracle_overlap(p: Gaussian1D, q: Gaussian1D, settings: Optional[QuadratureSettings] = None) -> float:
    """Integral of p q."""
    return _integrate_gaussians(lambda x: pdf_1d(p, x) * pdf_1d(q, x), (p, q), settings)


def oracle_bhattacharyya(p: Gaussian1D, q: Gaussian1D, settings: Optional[QuadratureSettings] = None) -> float:
    """Integral of sqrt(p q)."""
    return _integrate_gaussians(lambda x: np.sqrt(pdf_1d(p, x) * pdf_1d(q, x)), (p, q), settings)


def oracle_sq_difference(p: Gaussian1D, q: Gaussian1D, settings: Optional[QuadratureSettings] = None) -> float:
    """Integral of (p - q)^2, integrated directly rather than expanded."""
    return _integrate_gaussians(lambda x: (pdf_1d(p, x) - pdf_1d(q, x)) ** 2, (p, q), settings)


@lru_cache(maxsize=4096)
def _cached_norm(mu: float, sigma: float, settings: QuadratureSettings) -> float:
    return oracle_l2_norm_squared(Gaussian1D(mu, sigma), settings)


def oracle_psi_1d(p: Gaussian1D, q: Gaussian1D, settings: Optional[QuadratureSettings] = None) -> float:
    """2 int (p - q)^2 / ((1 - int p^2)(1 - int q^2)) from quadrature alone."""
    s = settings or QuadratureSettings()
    np2 = _cached_norm(p.mu, p.sigma, s)
    nq2 = _cached_norm(q.mu, q.sigma, s)
    if np2 >= 1.0 or nq2 >= 1.0:
        raise InvalidNorm(f"quadrature squared norms {np2!r}, {nq2!r} are not < 1")
    return 2.0 * oracle_sq_difference(p, q, s) / ((1.0 - np2) * (1.0 - nq2))


# -- multivariate ------------------------------------------------------------

GRID_MAX_DIM = 3
MC_MAX_DIM = 6
HERMITE_ORDER = 64


@dataclass(frozen=True)
class NDOracleResult:
    psi: float
    int_p2: float
    int_q2: float
    int_pq: float
    # standard errors of the three integrals; zero for the deterministic grid
    se_p2: float
    se_q2: float
    se_pq: float
    method: str


def _hermite_expectation(g: GaussianND, h: Callable[[np.ndarray], np.ndarray], order: int) -> float:
    """E_g[h(X)] by tensor-product Gauss-Hermite after whitening with chol(Sigma)."""
    y, w = hermgauss(order)
    n = g.n
    grids = np.meshgrid(*([y] * n), indexing="ij")
    nodes = np.stack([gr.reshape(-1) for gr in grids], axis=1)
    weights = np.ones(nodes.shape[0])
    for wg in np.meshgrid(*([w] * n), indexing="ij"):
        weights = weights * wg.reshape(-1)
    x = g.mu + math.sqrt(2.0) * nodes @ g.chol.T
    return float(weights @ h(x)) / math.pi ** (n / 2.0)


def box_muller(rng: np.random.Generator, size: int) -> np.ndarray:
    """``size`` standard normal draws built from pairs of uniforms."""
    m = (size + 1) // 2
    u1 = 1.0 - rng.random(m)  # (0, 1]
    u2 = rng.random(m)
    r = np.sqrt(-2.0 * np.log(u1))
    out = np.concatenate([r * np.cos(2.0 * np.pi * u2), r * np.sin(2.0 * np.pi * u2)])
    return out[:size]


def _mc_expectation(g: GaussianND, h, mc: MonteCarloSettings, stream: int) -> tuple[float, float]:
    """Mean and standard error of h(X), X ~ g, from a deterministic substream."""
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([mc.seed, stream])))
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < mc.samples:
        m = min(mc.chunk, mc.samples - done)
        z = box_muller(rng, m * g.n).reshape(m, g.n)
        v = h(g.mu + z @ g.chol.T)
        total += math.fsum(v)
        total_sq += math.fsum(v * v)
        done += m
    mean = total / done
    var = max(total_sq / done - mean * mean, 0.0) * done / (done - 1)
    return mean, math.sqrt(var / done)


def oracle_psi_nd(
    p: GaussianND,
    q: GaussianND,
    mc: Optional[MonteCarloSettings] = None,
    method: str = "auto",
    order: int = HERMITE_ORDER,
) -> NDOracleResult:
    """Psi from numerically estimated integrals on R^n.

    int p^2 = E_p[p(X)], int q^2 = E_q[q(X)], int p q = E_p[q(X)].
    ``method`` is "grid" (Gauss-Hermite tensor grid, n <= 3), "mc"
    (Monte Carlo with Box-Muller draws, n <= 6) or "auto" (grid if possible).
    """
    if p.n != q.n:
        raise DimensionMismatch(f"dimensions differ: {p.n} vs {q.n}")
    n = p.n
    if method == "auto":
        method = "grid" if n <= GRID_MAX_DIM else "mc"
    if method == "grid":
        if n > GRID_MAX_DIM:
            raise DimensionTooLarge(f"tensor grid supports n <= {GRID_MAX_DIM}, got {n}")
        ip2 = _hermite_expectation(p, lambda x: pdf_nd(p, x), order)
        iq2 = _hermite_expectation(q, lambda x: pdf_nd(q, x), order)
        ipq = _hermite_expectation(p, lambda x: pdf_nd(q, x), order)
        se = (0.0, 0.0, 0.0)
    elif method == "mc":
        if n > MC_MAX_DIM:
            raise DimensionTooLarge(f"Monte Carlo oracle supports n <= {MC_MAX_DIM}, got {n}")
        mc = mc or MonteCarloSettings()
        ip2, se_p2 = _mc_expectation(p, lambda x: pdf_nd(p, x), mc, 0)
        iq2, se_q2 = _mc_expectation(q, lambda x: pdf_nd(q, x), mc, 1)
        ipq, se_pq = _mc_expectation(p, lambda x: pdf_nd(q, x), mc, 2)
        se = (se_p2, se_q2, se_pq)
    else:
        raise InvalidParameter(f"unknown oracle method {method!r}")
    if ip2 >= 1.0 or iq2 >= 1.0:
        raise InvalidNorm(f"estimated squared norms {ip2!r}, {iq2!r} are not < 1")
    psi = 2.0 * (ip2 - 2.0 * ipq + iq2) / ((1.0 - ip2) * (1.0 - iq2))
    return NDOracleResult(psi, ip2, iq2, ipq, *se, method)
