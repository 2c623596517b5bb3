"""Kullback-Leibler divergence between two Weibull models.

The complete-data divergence is the classical closed form. Under type I
censoring at time c the observable is the pair (Y, Delta) = (min(T, c),
1{T <= c}); its KL divergence has a continuous part on (0, c) plus a point
mass at c, and evaluates in closed form through the incomplete gamma and the
exponential integral. Both divergences use the generating model's censoring
argument z0 = (c/lambda0)^k0 throughout.
"""

import math

from .distribution import WeibullParams
from .special import EULER_GAMMA, exp_integral_ei, log_gamma, upper_inc_gamma

__all__ = ["kl_complete", "kl_censored"]

# log of the largest representable double; exponentials beyond this overflow
_LOG_MAX = math.log(8.98846567431158e307)


def _clamp(value: float) -> float:
    if value < 0.0:
        if value > -1e-10:
            return 0.0
        raise ArithmeticError(f"KL divergence evaluated negative ({value!r}); inputs out of supported range")
    return value


def kl_complete(generator: WeibullParams, candidate: WeibullParams) -> float:
    """KL(generator || candidate) for fully observed Weibull data."""
    k0, l0 = generator.shape_k, generator.scale_lambda
    k1, l1 = candidate.shape_k, candidate.scale_lambda
    s = k1 / k0
    log_main = k1 * math.log(l0 / l1) + math.log(s) + log_gamma(s)
    if log_main > _LOG_MAX:
        raise OverflowError(
            f"KL overflow: (lambda0/lambda1)^k1 * Gamma(k1/k0) exceeds double range "
            f"(k0={k0}, lambda0={l0}, k1={k1}, lambda1={l1})"
        )
    return _clamp(math.exp(log_main) + (s - 1.0) * EULER_GAMMA - math.log(s) + k1 * math.log(l1 / l0) - 1.0)


def kl_censored(generator: WeibullParams, candidate: WeibullParams, censor_time: float) -> float:
    """KL(generator || candidate) for the censored observable (Y, Delta)."""
    c = float(censor_time)
    if not (math.isfinite(c) and c > 0.0):
        raise ValueError(f"censor_time must be positive and finite, got {censor_time!r}")
    k0, l0 = generator.shape_k, generator.scale_lambda
    k1, l1 = candidate.shape_k, candidate.scale_lambda

    log_z0 = k0 * math.log(c / l0)
    if log_z0 > _LOG_MAX:
        z0 = math.inf
    else:
        z0 = math.exp(log_z0)
    s = k1 / k0 + 1.0
    log_ratio = k1 * math.log(l0 / l1)

    # survival block: exp(-z0) * A1, with the (c/lambda1)^k1 part kept in log
    # space so that huge powers against tiny exp(-z0) keep full precision
    a1_log_part = math.log(k1 / k0) + (k1 - k0) * math.log(c) + k0 * math.log(l0) - k1 * math.log(l1)
    term_surv = math.exp(-z0) * (a1_log_part + 1.0) + math.exp(k1 * math.log(c / l1) - z0)

    log_gamma_s = log_gamma(s)
    if log_ratio + log_gamma_s > _LOG_MAX or log_gamma_s > _LOG_MAX:
        raise OverflowError(
            f"KL overflow: (lambda0/lambda1)^k1 * Gamma(k1/k0+1, .) exceeds double range "
            f"(k0={k0}, lambda0={l0}, k1={k1}, lambda1={l1}, c={c})"
        )
    a2 = math.exp(log_gamma_s) - upper_inc_gamma(s, z0) if math.isfinite(z0) else math.exp(log_gamma_s)
    a3 = (exp_integral_ei(-z0) if math.isfinite(z0) else 0.0) - EULER_GAMMA

    value = (term_surv + math.exp(log_ratio) * a2 + (1.0 - k1 / k0) * a3
             + math.log(k0 / k1) + k1 * math.log(l1 / l0) - 1.0)
    return _clamp(value)
