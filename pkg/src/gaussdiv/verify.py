"""Self-verification: every closed form against its oracle or identity.

Used by ``gaussdiv verify``. Each check reports its largest error, the bound
it must respect and the parameters at which the largest error occurred.
"""

from __future__ import annotations

import cmath
import itertools
import math
import time
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .gaussian import Gaussian1D, GaussianND
from .hyperbolic import (
    DiscPoint,
    HalfPlanePoint,
    MobiusMap,
    disc_distance,
    embed_half_plane,
    fisher_rao_zeta,
    psi_geometric,
    to_disc,
)
from .multivariate import product_integrals, psi_multivariate
from .oracle import oracle_bhattacharyya, oracle_l2_norm_squared, oracle_overlap, oracle_psi_1d
from .psi import BrownianPair, brownian_psi, is_valid_sigma, l2_norm_squared, lambda_term, psi_closed_form
from .spherical import bhattacharyya_coefficient, spherical_report

GRIDS = {
    "small": ((-1.0, 0.0, 1.0), (0.5, 1.0, 2.0), 100),
    "full": ((-3.0, -1.0, 0.0, 1.0, 3.0), (0.3, 0.5, 1.0, 2.0, 5.0), 1000),
}
SEED = 7


@dataclass(frozen=True)
class CheckResult:
    name: str
    max_error: float
    bound: float
    worst: str
    seconds: float

    @property
    def passed(self) -> bool:
        return self.max_error <= self.bound


def _run(name: str, bound: float, cases: Iterable, err: Callable) -> CheckResult:
    t0 = time.perf_counter()
    worst_err, worst = 0.0, "-"
    for case in cases:
        e = err(*case)
        if not e <= worst_err:  # NaN also lands here
            worst_err, worst = e, repr(case)
        if math.isnan(e):
            worst_err = math.inf
            break
    return CheckResult(name, worst_err, bound, worst, time.perf_counter() - t0)


def _rel(a: float, b: float) -> float:
    return 0.0 if a == b else abs(a - b) / max(abs(a), abs(b))


def grid_pairs(mus, sigmas):
    gs = [Gaussian1D(m, s) for m in mus for s in sigmas]
    return list(itertools.product(gs, gs))


def random_gaussian(rng: np.random.Generator, mu=(-3.0, 3.0), sigma=(0.3, 5.0)) -> Gaussian1D:
    return Gaussian1D(rng.uniform(*mu), rng.uniform(*sigma))


def random_spd(rng: np.random.Generator, n: int) -> np.ndarray:
    a = rng.normal(size=(n, n))
    return a @ a.T + 0.5 * np.eye(n)


def run_verification(grid: str = "small", lambda_offset: float = 0.0) -> list[CheckResult]:
    """Run all checks. ``lambda_offset`` perturbs the closed-form lambda (detector test)."""
    mus, sigmas, n_random = GRIDS[grid]
    pairs = grid_pairs(mus, sigmas)
    valid_pairs = [(p, q) for p, q in pairs if is_valid_sigma(p.sigma) and is_valid_sigma(q.sigma)]
    gaussians = sorted({p for p, _ in pairs}, key=lambda g: (g.mu, g.sigma))
    rng = np.random.default_rng(SEED)
    sq2 = math.sqrt(2.0)

    results = [
        _run("psi_oracle", 1e-9, valid_pairs,
             lambda p, q: _rel(psi_closed_form(p, q).psi, oracle_psi_1d(p, q))),
        _run("lambda_identity", 1e-10, pairs,
             lambda p, q: abs(4.0 * oracle_overlap(p, q) - 2.0 * sq2 * (lambda_term(p, q) + lambda_offset))),
        _run("l2_norm", 1e-10, [(g,) for g in gaussians],
             lambda g: abs(oracle_l2_norm_squared(g) - l2_norm_squared(g))),
        _run("bhattacharyya", 1e-9, pairs,
             lambda p, q: abs(bhattacharyya_coefficient(p, q) - oracle_bhattacharyya(p, q))),
        _run("hellinger_cosine", 1e-15, pairs,
             lambda p, q: (lambda r: abs(r.hellinger_sq - (1.0 - math.cos(r.angle))))(spherical_report(p, q))),
    ]

    chain_cases = []
    for _ in range(n_random):
        p, q = random_gaussian(rng), random_gaussian(rng)
        m = MobiusMap(HalfPlanePoint(complex(rng.uniform(-2, 2), rng.uniform(0.5, 2.0))), rng.uniform(0, 2 * math.pi))
        chain_cases.append((p, q, m))

    def chain_err(p, q, m):
        d = disc_distance(to_disc(m, embed_half_plane(p)), to_disc(m, embed_half_plane(q)))
        return abs(d - 2.0 * math.atanh(fisher_rao_zeta(p, q)))

    results.append(_run("hyperbolic_chain", 1e-11, chain_cases, chain_err))

    disc_cases = []
    for _ in range(n_random):
        r = np.sqrt(rng.uniform(0, 0.81, size=2))
        a = rng.uniform(0, 2 * math.pi, size=2)
        disc_cases.append((DiscPoint(cmath.rect(r[0], a[0])), DiscPoint(cmath.rect(r[1], a[1]))))
    results.append(_run("cosh_identity", 1e-11, disc_cases,
                        lambda x, y: abs(psi_geometric(x, y) - (math.cosh(disc_distance(x, y)) - 1.0))))

    reduction_cases = [(random_gaussian(rng), random_gaussian(rng)) for _ in range(n_random // 5)]
    results.append(_run(
        "multivariate_reduction", 1e-12, reduction_cases,
        lambda p, q: _rel(psi_multivariate(GaussianND.from_1d(p), GaussianND.from_1d(q)).psi,
                          psi_closed_form(p, q).psi)))

    route_cases = []
    for i in range(n_random // 5):
        n = 1 + i % 3
        route_cases.append((GaussianND(rng.normal(size=n), random_spd(rng, n)),
                            GaussianND(rng.normal(size=n), random_spd(rng, n))))
    results.append(_run("multivariate_routes", 1e-11, route_cases,
                        lambda p, q: product_integrals(p, q).route_discrepancy()))

    brownian_cases = []
    for _ in range(n_random // 5):
        bp = BrownianPair(rng.uniform(-2, 2), rng.uniform(0.2, 3), rng.uniform(-2, 2), rng.uniform(0.2, 3))
        t = rng.uniform(0.1, 5.0) + max(1 / (4 * bp.vol_p**2 * math.pi), 1 / (4 * bp.vol_q**2 * math.pi))
        brownian_cases.append((bp, t))
    results.append(_run("brownian", 1e-12, brownian_cases,
                        lambda bp, t: _rel(brownian_psi(bp, t), psi_closed_form(*bp.at(t)).psi)))
    return results
