"""Psi for Gaussians on R^n via natural-parameter log-normalizers.

Writing each density as exp(Lambda + muhat^T x - x^T P x / 2), a product of
two densities is again of that form with precision P_a + P_b and
muhat_a + muhat_b, so

    int p q = exp(Lambda_p + Lambda_q - Lambda_pq),
    int p^2 = exp(2 Lambda_p - Lambda_pp),   int q^2 = exp(2 Lambda_q - Lambda_qq).

Every inverse and determinant goes through a Cholesky factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve, LinAlgError

from .errors import DimensionMismatch, FactorizationFailure, InvalidNorm
from .gaussian import LOG_2PI, GaussianND, natural_params
from .psi import CS_TOL, PsiReport, SQRT2


@dataclass(frozen=True)
class ProductTerms:
    lambda_p: float
    lambda_q: float
    lambda_pq: float
    lambda_pp: float
    lambda_qq: float
    int_pq: float
    int_p2: float
    int_q2: float
    # the same integrals from (2 pi)^{-n/2} |S|^{-1/2} exp(-d^T S^{-1} d / 2), S = Sigma_p + Sigma_q
    direct_int_pq: float
    direct_int_p2: float
    direct_int_q2: float

    @property
    def log_int_p2(self) -> float:
        return 2.0 * self.lambda_p - self.lambda_pp

    @property
    def log_int_q2(self) -> float:
        return 2.0 * self.lambda_q - self.lambda_qq

    @property
    def log_int_pq(self) -> float:
        return self.lambda_p + self.lambda_q - self.lambda_pq

    def route_discrepancy(self) -> float:
        """Largest relative gap between the Lambda route and the direct route."""
        pairs = ((self.int_pq, self.direct_int_pq), (self.int_p2, self.direct_int_p2),
                 (self.int_q2, self.direct_int_q2))
        return max(abs(a - b) / abs(b) for a, b in pairs)


def _check_dims(a: GaussianND, b: GaussianND):
    if a.n != b.n:
        raise DimensionMismatch(f"dimensions differ: {a.n} vs {b.n}")


def _log_normalizer(precision: np.ndarray, muhat: np.ndarray) -> float:
    try:
        factor = cho_factor(precision, lower=True)
    except LinAlgError as exc:
        raise FactorizationFailure("combined precision matrix is not numerically SPD") from exc
    diag = np.diag(factor[0])
    if not np.all(diag > 0.0):
        raise FactorizationFailure("combined precision matrix is not numerically SPD")
    logdet_prec = 2.0 * float(np.sum(np.log(diag)))
    quad = float(muhat @ cho_solve(factor, muhat))
    return -0.5 * (muhat.shape[0] * LOG_2PI - logdet_prec + quad)


def lambda_combined(a: GaussianND, b: GaussianND) -> float:
    """Lambda_ab for the (unnormalized) product density of ``a`` and ``b``."""
    _check_dims(a, b)
    precision = a.precision() + b.precision()
    precision = 0.5 * (precision + precision.T)
    muhat = natural_params(a)[0] + natural_params(b)[0]
    return _log_normalizer(precision, muhat)


def _direct_overlap(a: GaussianND, b: GaussianND) -> float:
    s = a.sigma + b.sigma
    try:
        factor = cho_factor(s, lower=True)
    except LinAlgError as exc:
        raise FactorizationFailure("Sigma_p + Sigma_q is not numerically SPD") from exc
    logdet = 2.0 * float(np.sum(np.log(np.diag(factor[0]))))
    d = a.mu - b.mu
    return math.exp(-0.5 * (a.n * LOG_2PI + logdet + float(d @ cho_solve(factor, d))))


def product_integrals(p: GaussianND, q: GaussianND) -> ProductTerms:
    _check_dims(p, q)
    lam_p = natural_params(p)[1]
    lam_q = natural_params(q)[1]
    lam_pq = lambda_combined(p, q)
    lam_pp = lambda_combined(p, p)
    lam_qq = lambda_combined(q, q)
    n = p.n
    return ProductTerms(
        lambda_p=lam_p,
        lambda_q=lam_q,
        lambda_pq=lam_pq,
        lambda_pp=lam_pp,
        lambda_qq=lam_qq,
        int_pq=math.exp(lam_p + lam_q - lam_pq),
        int_p2=math.exp(2.0 * lam_p - lam_pp),
        int_q2=math.exp(2.0 * lam_q - lam_qq),
        direct_int_pq=_direct_overlap(p, q),
        direct_int_p2=math.exp(-0.5 * (n * math.log(4.0 * math.pi) + p.logdet)),
        direct_int_q2=math.exp(-0.5 * (n * math.log(4.0 * math.pi) + q.logdet)),
    )


def is_valid_covariance(g: GaussianND) -> bool:
    """int p^2 < 1, i.e. |Sigma| > (4 pi)^{-n}; reduces to sigma > 1/(2 sqrt(pi)) at n = 1."""
    return g.logdet > -g.n * math.log(4.0 * math.pi)


def psi_multivariate(p: GaussianND, q: GaussianND, *, strict: bool = True) -> PsiReport:
    """Psi(P, Q) assembled from the three Lambda-route integrals.

    Numerator is regrouped as (sqrt(A) - sqrt(B))^2 - 2 sqrt(AB) expm1(c - (a + b)/2)
    with A = e^a = int p^2, B = e^b = int q^2, C = e^c = int p q, which is the
    same expression without the cancellation of A - 2C + B.
    ``report.lambda_`` is sqrt(2) int p q, matching the univariate lambda.
    """
    terms = product_integrals(p, q)
    a, b, c = terms.log_int_p2, terms.log_int_q2, terms.log_int_pq
    if a >= 0.0 or b >= 0.0:
        if strict:
            raise InvalidNorm(f"squared L2 norms must be < 1 (log values {a!r}, {b!r})")
        return PsiReport(None, math.exp(min(a, 700.0)), math.exp(min(b, 700.0)), SQRT2 * terms.int_pq, False)
    if terms.int_pq**2 > terms.int_p2 * terms.int_q2 + CS_TOL:
        raise FactorizationFailure("product integrals violate Cauchy-Schwarz; covariance input is ill-conditioned")
    ra, rb = math.exp(0.5 * a), math.exp(0.5 * b)
    num = (ra - rb) ** 2 - 2.0 * ra * rb * math.expm1(min(c - 0.5 * (a + b), 0.0))
    psi = 2.0 * num / (-math.expm1(a) * -math.expm1(b))
    return PsiReport(psi, terms.int_p2, terms.int_q2, SQRT2 * terms.int_pq, True)
