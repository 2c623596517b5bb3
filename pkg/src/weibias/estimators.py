"""Point estimators for Weibull shape and scale.

Four methods share one profiled estimating equation in the shape k:

    a/k + sum(delta_i log y_i) - d * sum(y_i^k log y_i) / sum(y_i^k) = 0

with (a, d) = (n, n) for plain ML on complete data, (d, d) under type I
censoring, and a reduced by 2 (complete) or down to d-1 (censored) for the
conditional-likelihood variant MLC. The scale is always recovered from
lambda^k = sum(y_i^k) / d at the method's shape, so every report is
internally consistent. MMLE subtracts the first-order (Cox-Snell) bias from
the ML estimates; ROSS applies the classic (n-2)/(n-0.68) shrinkage.

All scores are evaluated on max-normalized data, which leaves the shape
estimate unchanged and keeps y^k finite for any k the solver visits.
"""

import math
from dataclasses import dataclass

import numpy as np

from .distribution import CensoredSample, WeibullParams, log_likelihood, uncensored_fraction
from .errors import (
    ConvergenceError,
    CorrectionOvershootError,
    InsufficientDataError,
    NoSolutionError,
    SingularityError,
)
from .special import EULER_GAMMA, ZETA3, inc_gamma_deriv

__all__ = [
    "EstimatorReport",
    "BiasAdjustment",
    "SHAPE_BIAS_CONST",
    "SCALE_BIAS_C1",
    "SCALE_BIAS_C2",
    "fit_ml",
    "fit_ross",
    "fit_mlc",
    "fit_mmle",
    "mmle_from_ml",
    "ross_from_ml",
    "bias_complete",
    "bias_censored",
    "shape_bias_factor",
    "scale_bias_factors",
    "ml_score",
    "mlc_score",
    "lambda_from_shape",
]

_PI2 = math.pi**2
_PI4 = math.pi**4

# Complete-data first-order bias coefficients: Bias(k) = k * SHAPE_BIAS_CONST / n,
# Bias(lambda) = lambda * (SCALE_BIAS_C1/(n k^2) + SCALE_BIAS_C2/(n k)).
# Evaluated from the constants (approx 1.3795, 0.5543, -0.3698).
SHAPE_BIAS_CONST = 18.0 * (_PI2 - 2.0 * ZETA3) / _PI4
SCALE_BIAS_C1 = 3.0 * (EULER_GAMMA - 1.0) ** 2 / _PI2 + 0.5
SCALE_BIAS_C2 = 36.0 * (EULER_GAMMA - 1.0) * ZETA3 / _PI4 + (15.0 - 12.0 * EULER_GAMMA) / _PI2 - 1.0

_MAX_ITER = 80
_K_MIN, _K_MAX = 1e-6, 1e6


@dataclass(frozen=True)
class EstimatorReport:
    """Fit result: method tag, parameter estimates, solver diagnostics."""

    method: str
    params: WeibullParams
    p_hat: float | None
    iterations: int
    converged: bool


@dataclass(frozen=True)
class BiasAdjustment:
    """Additive first-order bias estimates for (shape, scale)."""

    bias_k: float
    bias_lambda: float


class _ScoreData:
    """Max-normalized arrays shared by the score, its derivative and lambda."""

    def __init__(self, s: CensoredSample):
        self.scale = float(np.max(s.values))
        self.ys = s.values / self.scale      # in (0, 1], so ys**k never overflows
        self.log_ys = np.log(self.ys)
        self.d = s.d
        self.sum_dlog = float(np.sum(s.indicators * self.log_ys))

    def score(self, a: float, k: float) -> float:
        yk = self.ys**k
        sw = float(np.sum(yk))
        return a / k + self.sum_dlog - self.d * float(np.sum(yk * self.log_ys)) / sw

    def score_and_deriv(self, a: float, k: float) -> tuple[float, float]:
        yk = self.ys**k
        sw = float(np.sum(yk))
        w1 = float(np.sum(yk * self.log_ys)) / sw
        w2 = float(np.sum(yk * self.log_ys**2)) / sw
        return a / k + self.sum_dlog - self.d * w1, -a / k**2 - self.d * (w2 - w1**2)

    def lam(self, k: float) -> float:
        return self.scale * (float(np.sum(self.ys**k)) / self.d) ** (1.0 / k)


def _initial_shape(s: CensoredSample) -> float:
    sd = float(np.std(np.log(s.event_values)))
    return 1.2 / sd if sd > 0.0 else 1.0


def _solve_shape(data: _ScoreData, a: float, start: float) -> tuple[float, int]:
    """Safeguarded Newton (in log k) with geometric-bisection fallback."""
    if data.sum_dlog >= 0.0:
        # every event sits at the sample maximum: score = a/k > 0 for all k
        raise NoSolutionError(
            "estimating equation has no root (degenerate data: all values identical "
            "or every event at the censoring time)"
        )
    lo = hi = min(max(start, _K_MIN), _K_MAX)
    f_at = data.score(a, lo)
    if f_at > 0.0:
        while True:
            hi *= 4.0
            if data.score(a, hi) < 0.0:
                break
            if hi > _K_MAX:
                raise NoSolutionError("no sign change up to k = 1e6; data degenerate")
    else:
        while True:
            lo /= 4.0
            if data.score(a, lo) > 0.0:
                break
            if lo < _K_MIN:
                raise NoSolutionError("no sign change down to k = 1e-6; data degenerate")

    k = math.sqrt(lo * hi)
    for it in range(1, _MAX_ITER + 1):
        f, fp = data.score_and_deriv(a, k)
        if f > 0.0:
            lo = k
        elif f < 0.0:
            hi = k
        if abs(f) * k <= 1e-10 or (hi - lo) <= 1e-12 * k or f == 0.0:
            return k, it
        k_new = k - f / fp if fp < 0.0 else math.inf
        if not (lo < k_new < hi) or not math.isfinite(k_new):
            k_new = math.sqrt(lo * hi)
        k = k_new
    raise ConvergenceError(
        f"shape solver did not converge in {_MAX_ITER} iterations",
        iterations=_MAX_ITER,
        residual=data.score(a, k),
    )


def _check_maximum(s: CensoredSample, data: _ScoreData, k: float) -> None:
    # profile log-likelihood must decrease at k*(1 +/- 0.01)
    ll = log_likelihood(WeibullParams(k, data.lam(k)), s)
    for kk in (0.99 * k, 1.01 * k):
        if log_likelihood(WeibullParams(kk, data.lam(kk)), s) > ll + 1e-9 * abs(ll):
            raise ConvergenceError(f"solved root k={k} is not a likelihood maximum")


def ml_score(s: CensoredSample, k: float) -> float:
    """Value of the ML estimating equation at shape k (max-normalized data)."""
    data = _ScoreData(s)
    return data.score(float(s.n if s.is_complete else s.d), float(k))


def mlc_score(s: CensoredSample, k: float) -> float:
    """Value of the MLC (conditional-likelihood) estimating equation at shape k."""
    data = _ScoreData(s)
    return data.score(float(s.n - 2 if s.is_complete else s.d - 1), float(k))


def lambda_from_shape(s: CensoredSample, k: float) -> float:
    """Scale estimate (sum y_i^k / d)^(1/k) at a given shape."""
    return _ScoreData(s).lam(float(k))


def fit_ml(s: CensoredSample) -> EstimatorReport:
    """Maximum-likelihood fit; shape by root-finding, scale in closed form."""
    if s.is_complete and s.n < 2:
        raise InsufficientDataError("ML on complete data requires n >= 2")
    if s.d == 0:
        raise NoSolutionError("no uncensored observations: likelihood has no interior maximum")
    data = _ScoreData(s)
    k, iters = _solve_shape(data, float(s.d), _initial_shape(s))
    _check_maximum(s, data, k)
    return EstimatorReport("ML", WeibullParams(k, data.lam(k)), None, iters, True)


def ross_from_ml(s: CensoredSample, ml_report: EstimatorReport) -> EstimatorReport:
    """Apply the Ross shrinkage to an existing ML report (complete data only)."""
    if not s.is_complete:
        raise InsufficientDataError("the Ross correction is only supported for complete data")
    if s.n < 3:
        raise InsufficientDataError("Ross correction requires n >= 3")
    k = (s.n - 2.0) / (s.n - 0.68) * ml_report.params.shape_k
    return EstimatorReport("ROSS", WeibullParams(k, lambda_from_shape(s, k)), None,
                           ml_report.iterations, ml_report.converged)


def fit_ross(s: CensoredSample) -> EstimatorReport:
    """Ross-corrected shape (n-2)/(n-0.68) * k_ML, scale re-estimated. Complete data only."""
    if not s.is_complete:
        raise InsufficientDataError("the Ross correction is only supported for complete data")
    if s.n < 3:
        raise InsufficientDataError("Ross correction requires n >= 3")
    return ross_from_ml(s, fit_ml(s))


def fit_mlc(s: CensoredSample) -> EstimatorReport:
    """Conditional-likelihood shape estimate: (n-2) or (d-1) in the score numerator."""
    if s.is_complete:
        if s.n < 3:
            raise InsufficientDataError("MLC on complete data requires n >= 3")
        a = float(s.n - 2)
    else:
        if s.d < 2:
            raise InsufficientDataError("MLC under censoring requires d >= 2 uncensored observations")
        a = float(s.d - 1)
    data = _ScoreData(s)
    k, iters = _solve_shape(data, a, _initial_shape(s))
    return EstimatorReport("MLC", WeibullParams(k, data.lam(k)), None, iters, True)


def shape_bias_factor(p: float) -> float:
    """f(p): first-order shape bias is k * f(p) / n at uncensored proportion p."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p!r}")
    z = -math.log1p(-p)
    g1 = inc_gamma_deriv(1, z)
    g2 = inc_gamma_deriv(2, z)
    g3 = inc_gamma_deriv(3, z)
    det = g1 * g1 - g2 * p
    if abs(det) < 1e-14:
        raise SingularityError(f"information determinant ~ 0 at p={p!r} (censoring too extreme)")
    num = -3.0 * (2.0 * g1 + g2) * g1 * p + (6.0 * g2 + g3) * p * p + 2.0 * g1**3
    return num / (2.0 * det * det)


def scale_bias_factors(p: float) -> tuple[float, float]:
    """(f1(p), f2(p)): scale bias is lambda * (f1/(n k^2) + f2/(n k))."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p!r}")
    z = -math.log1p(-p)
    g1 = inc_gamma_deriv(1, z)
    g2 = inc_gamma_deriv(2, z)
    g3 = inc_gamma_deriv(3, z)
    det = g1 * g1 - g2 * p
    if abs(det) < 1e-14:
        raise SingularityError(f"information determinant ~ 0 at p={p!r} (censoring too extreme)")
    f1 = -(p + 2.0 * g1 + g2) / (2.0 * det)
    f2 = ((5.0 * g2 + g3) * p * p + (-5.0 * g1 * g1 + (g2 + g3) * g1 - 2.0 * g2 * g2) * p
          + (g2 - 2.0 * g1) * g1 * g1) / (2.0 * det * det)
    return f1, f2


def bias_complete(params: WeibullParams, n: int) -> BiasAdjustment:
    """First-order (Cox-Snell) bias of the ML estimates on complete data of size n."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n!r}")
    k, lam = params.shape_k, params.scale_lambda
    return BiasAdjustment(
        bias_k=k * SHAPE_BIAS_CONST / n,
        bias_lambda=lam * (SCALE_BIAS_C1 / (n * k * k) + SCALE_BIAS_C2 / (n * k)),
    )


def bias_censored(params: WeibullParams, n: int, p: float) -> BiasAdjustment:
    """First-order bias under type I censoring with uncensored proportion p."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n!r}")
    k, lam = params.shape_k, params.scale_lambda
    f = shape_bias_factor(p)
    f1, f2 = scale_bias_factors(p)
    return BiasAdjustment(
        bias_k=k * f / n,
        bias_lambda=lam * (f1 / (n * k * k) + f2 / (n * k)),
    )


def mmle_from_ml(s: CensoredSample, ml: EstimatorReport, p_plugin: str = "model") -> EstimatorReport:
    """Subtract the estimated first-order bias from an existing ML report."""
    if p_plugin not in ("model", "d_over_n"):
        raise ValueError(f"p_plugin must be 'model' or 'd_over_n', got {p_plugin!r}")
    if s.is_complete:
        adj = bias_complete(ml.params, s.n)
        p_hat = None
    else:
        p_hat = uncensored_fraction(ml.params, s.censor_time) if p_plugin == "model" else s.d / s.n
        # p_hat can round to 1.0 when c >> lambda_hat; the bias factors are
        # continuous there, so evaluate just inside the boundary
        adj = bias_censored(ml.params, s.n, min(p_hat, 1.0 - 1e-12))
    if not adj.bias_k > 0.0:
        raise CorrectionOvershootError(f"nonpositive shape bias estimate {adj.bias_k!r}")
    k = ml.params.shape_k - adj.bias_k
    lam = ml.params.scale_lambda - adj.bias_lambda
    if k <= 0.0 or lam <= 0.0:
        raise CorrectionOvershootError(
            f"bias correction overshoots the parameter space: k_tilde={k:.6g}, lambda_tilde={lam:.6g} "
            f"(n={s.n}, p_hat={p_hat})"
        )
    return EstimatorReport("MMLE", WeibullParams(k, lam), p_hat, ml.iterations, ml.converged)


def fit_mmle(s: CensoredSample, p_plugin: str = "model") -> EstimatorReport:
    """Bias-adjusted ML: theta_ML minus its estimated first-order bias.

    For censored samples the unknown uncensored proportion is plugged in as
    p_hat = 1 - exp(-(c/lambda_ML)^k_ML) (``p_plugin="model"``) or as d/n
    (``p_plugin="d_over_n"``); the value used is recorded in the report.
    """
    return mmle_from_ml(s, fit_ml(s), p_plugin)
