"""First-order ML bias via the Cordeiro-Klein matrix form.

Bias = K^-1 A vec(K^-1), with K the expected Fisher information and A the
2 x 4 matrix [A(1) | A(2)] built from third-order cumulants; vec stacks
K^-1 column-wise, matching the block layout of A. The Weibull K and A are
provided in closed form for complete data and for type I censoring at
uncensored proportion p; the bias evaluator itself accepts any externally
supplied (K, A) pair of that shape.
"""

import math
from dataclasses import dataclass

import numpy as np

from .distribution import WeibullParams
from .errors import SingularityError
from .special import EULER_GAMMA, ZETA3, inc_gamma_deriv

__all__ = [
    "FisherSystem",
    "weibull_fisher_complete",
    "weibull_fisher_censored",
    "cox_snell_bias",
]

_PI2 = math.pi**2


@dataclass(frozen=True)
class FisherSystem:
    """Expected information K (2x2), cumulant matrix A (2x4), sample size, regime."""

    k_matrix: np.ndarray
    a_matrix: np.ndarray
    n: int
    regime: str = "complete"          # "complete" or "censored"
    p: float | None = None            # uncensored proportion when censored

    def __post_init__(self):
        K = np.asarray(self.k_matrix, dtype=float)
        A = np.asarray(self.a_matrix, dtype=float)
        if K.shape != (2, 2):
            raise ValueError(f"k_matrix must be 2x2, got {K.shape}")
        if A.shape != (2, 4):
            raise ValueError(f"a_matrix must be 2x4, got {A.shape}")
        if self.regime not in ("complete", "censored"):
            raise ValueError(f"regime must be 'complete' or 'censored', got {self.regime!r}")
        object.__setattr__(self, "k_matrix", K)
        object.__setattr__(self, "a_matrix", A)


def weibull_fisher_complete(params: WeibullParams, n: int) -> FisherSystem:
    """Closed-form K and A for a complete Weibull sample of size n."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n!r}")
    k, lam = params.shape_k, params.scale_lambda
    g = EULER_GAMMA
    K = n * np.array([
        [(6.0 * (g - 1.0) ** 2 + _PI2) / (6.0 * k * k), (g - 1.0) / lam],
        [(g - 1.0) / lam, k * k / (lam * lam)],
    ])
    a11 = n * (-12.0 * ZETA3 - 3.0 * g * (2.0 * g * (g - 7.0) + _PI2 + 16.0) + 7.0 * _PI2 + 12.0) / (12.0 * k**3)
    a12 = -n * (6.0 * g * (g - 4.0) + _PI2 + 12.0) / (12.0 * k * lam)
    a22 = -n * (g * k + k + g - 1.0) / (2.0 * lam * lam)
    a13 = -n * (6.0 * g * (g - 4.0) + _PI2 + 12.0) / (12.0 * k * lam)
    a14 = n * (-g * k + 3.0 * k + g - 1.0) / (2.0 * lam * lam)
    a24 = -n * (k - 1.0) * k * k / (2.0 * lam**3)
    A = np.array([[a11, a12, a13, a14],
                  [a12, a22, a14, a24]])
    return FisherSystem(K, A, n, "complete", None)


def weibull_fisher_censored(params: WeibullParams, n: int, p: float) -> FisherSystem:
    """Closed-form K and A under type I censoring with uncensored proportion p."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n!r}")
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p!r}")
    k, lam = params.shape_k, params.scale_lambda
    z = -math.log1p(-p)
    g1 = inc_gamma_deriv(1, z)
    g2 = inc_gamma_deriv(2, z)
    g3 = inc_gamma_deriv(3, z)
    K = n * np.array([
        [(p + 2.0 * g1 + g2) / (k * k), -(p + g1) / lam],
        [-(p + g1) / lam, k * k * p / (lam * lam)],
    ])
    a11 = n * (2.0 * p + 8.0 * g1 + 7.0 * g2 + g3) / (2.0 * k**3)
    a12 = -n * (2.0 * p + 4.0 * g1 + g2) / (2.0 * k * lam)
    a22 = n * (g1 * (k + 1.0) - (k - 1.0) * p) / (2.0 * lam * lam)
    a13 = -n * (2.0 * p + 4.0 * g1 + g2) / (2.0 * k * lam)
    a14 = n * ((3.0 * k - 1.0) * p + g1 * (k - 1.0)) / (2.0 * lam * lam)
    a24 = -n * (k - 1.0) * k * k * p / (2.0 * lam**3)
    A = np.array([[a11, a12, a13, a14],
                  [a12, a22, a14, a24]])
    return FisherSystem(K, A, n, "censored", float(p))


def cox_snell_bias(system: FisherSystem) -> np.ndarray:
    """O(1/n) bias vector (bias of k, bias of lambda) = K^-1 A vec(K^-1)."""
    K = system.k_matrix
    det = K[0, 0] * K[1, 1] - K[0, 1] * K[1, 0]
    if not np.isfinite(det) or abs(det) < 1e-300 or np.linalg.cond(K) > 1e14:
        raise SingularityError("Fisher information matrix is numerically singular")
    k_inv = np.linalg.inv(K)
    return k_inv @ system.a_matrix @ k_inv.flatten(order="F")
