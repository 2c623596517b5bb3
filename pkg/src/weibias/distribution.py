"""Weibull distribution primitives and type I censored samples.

Parameterization: density (k/lambda^k) y^(k-1) exp(-(y/lambda)^k) with shape
k > 0 and scale lambda > 0. A censored sample stores each observation
y_i = min(t_i, c) together with the event indicator delta_i = 1{t_i <= c} and
the fixed censoring time c; ties t_i = c count as events.
"""

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "WeibullParams",
    "CensoredSample",
    "pdf",
    "cdf",
    "quantile",
    "censor_threshold_for_p",
    "uncensored_fraction",
    "sample",
    "apply_censoring",
    "log_likelihood",
]


@dataclass(frozen=True)
class WeibullParams:
    """Shape/scale parameter pair of a Weibull distribution."""

    shape_k: float
    scale_lambda: float

    def __post_init__(self):
        k, lam = self.shape_k, self.scale_lambda
        if not (np.isfinite(k) and k > 0.0):
            raise ValueError(f"shape_k must be positive and finite, got {k!r}")
        if not (np.isfinite(lam) and lam > 0.0):
            raise ValueError(f"scale_lambda must be positive and finite, got {lam!r}")


@dataclass(frozen=True)
class CensoredSample:
    """Observations with event indicators and an optional fixed censoring time.

    ``censor_time is None`` means complete data (all indicators 1). With a
    censoring time, every censored record must sit exactly at it and every
    event at or below it.
    """

    values: np.ndarray
    indicators: np.ndarray
    censor_time: float | None = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        indicators = np.asarray(self.indicators, dtype=np.int64)
        if values.ndim != 1 or values.size < 1:
            raise ValueError("values must be a non-empty 1-d array")
        if indicators.shape != values.shape:
            raise ValueError("values and indicators must have equal length")
        if not np.all(np.isfinite(values)) or np.any(values <= 0.0):
            raise ValueError("all observation values must be positive and finite")
        if not np.all((indicators == 0) | (indicators == 1)):
            raise ValueError("indicators must be 0 or 1")
        if self.censor_time is None:
            if not np.all(indicators == 1):
                raise ValueError("complete data (no censor_time) requires all indicators = 1")
        else:
            c = float(self.censor_time)
            if not (np.isfinite(c) and c > 0.0):
                raise ValueError(f"censor_time must be positive and finite, got {c!r}")
            if not np.all(values[indicators == 0] == c):
                raise ValueError("censored records must have value equal to censor_time")
            if np.any(values[indicators == 1] > c):
                raise ValueError("event values must not exceed censor_time")
            object.__setattr__(self, "censor_time", c)
        values.setflags(write=False)
        indicators.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "indicators", indicators)

    @classmethod
    def complete(cls, values) -> "CensoredSample":
        values = np.asarray(values, dtype=float)
        return cls(values=values, indicators=np.ones_like(values, dtype=np.int64))

    @property
    def n(self) -> int:
        return int(self.values.size)

    @property
    def d(self) -> int:
        """Number of uncensored observations, d = sum of indicators."""
        return int(self.indicators.sum())

    @property
    def is_complete(self) -> bool:
        return self.censor_time is None

    @property
    def event_values(self) -> np.ndarray:
        return self.values[self.indicators == 1]


def _check_positive(y, name="y"):
    y = np.asarray(y, dtype=float)
    if np.any(y <= 0.0) or not np.all(np.isfinite(y)):
        raise ValueError(f"{name} must be positive and finite")
    return y


def pdf(params: WeibullParams, y):
    """Density at y (scalar or array), y > 0."""
    y = _check_positive(y)
    k, lam = params.shape_k, params.scale_lambda
    out = (k / lam**k) * y ** (k - 1.0) * np.exp(-((y / lam) ** k))
    return out if out.ndim else float(out)


def cdf(params: WeibullParams, y):
    """Distribution function 1 - exp(-(y/lambda)^k)."""
    y = _check_positive(y)
    out = -np.expm1(-((y / params.scale_lambda) ** params.shape_k))
    return out if out.ndim else float(out)


def quantile(params: WeibullParams, u):
    """Inverse CDF: lambda * (-log(1-u))^(1/k) for u in (0, 1)."""
    u = np.asarray(u, dtype=float)
    if np.any(u <= 0.0) or np.any(u >= 1.0):
        raise ValueError("quantile requires 0 < u < 1")
    out = params.scale_lambda * (-np.log1p(-u)) ** (1.0 / params.shape_k)
    return out if out.ndim else float(out)


def censor_threshold_for_p(params: WeibullParams, p: float) -> float:
    """Censoring time c giving uncensored proportion p = 1 - exp(-(c/lambda)^k)."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p!r}")
    return float(quantile(params, p))


def uncensored_fraction(params: WeibullParams, c: float) -> float:
    """Probability of an event before the censoring time c."""
    if not (np.isfinite(c) and c > 0.0):
        raise ValueError(f"c must be positive and finite, got {c!r}")
    return float(-np.expm1(-((c / params.scale_lambda) ** params.shape_k)))


def sample(params: WeibullParams, n: int, rng: np.random.Generator) -> CensoredSample:
    """Draw n i.i.d. observations by inverse-CDF transform of rng uniforms."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n!r}")
    u = rng.random(int(n))
    values = params.scale_lambda * (-np.log1p(-u)) ** (1.0 / params.shape_k)
    return CensoredSample.complete(values)


def apply_censoring(s: CensoredSample, c: float) -> CensoredSample:
    """Censor a complete sample at time c: values min(y, c), indicators 1{y <= c}."""
    if not (np.isfinite(c) and c > 0.0):
        raise ValueError(f"c must be positive and finite, got {c!r}")
    indicators = (s.values <= c).astype(np.int64)
    return CensoredSample(values=np.minimum(s.values, c), indicators=indicators, censor_time=float(c))


def log_likelihood(params: WeibullParams, s: CensoredSample) -> float:
    """Log-likelihood of a (possibly censored) sample.

    d log(k/lambda^k) - sum (y_i/lambda)^k + (k-1) sum delta_i log y_i,
    which reduces to the usual complete-data form when all delta_i = 1.
    """
    k, lam = params.shape_k, params.scale_lambda
    d = s.d
    return float(
        d * (np.log(k) - k * np.log(lam))
        - np.sum((s.values / lam) ** k)
        + (k - 1.0) * np.sum(s.indicators * np.log(s.values))
    )
