"""Weibull maximum-likelihood estimation with first-order bias correction.

Point estimation (ML, Ross, conditional-likelihood MLC, bias-adjusted MMLE)
for complete and type I censored samples, the Cox-Snell/Cordeiro-Klein bias
machinery behind the corrections, KL divergences between Weibull models with
and without censoring, and a deterministic Monte Carlo benchmark harness.
"""

from .coxsnell import FisherSystem, cox_snell_bias, weibull_fisher_censored, weibull_fisher_complete
from .datasets import (
    load_recidivism_subsample,
    load_sample,
    load_type1_voltages,
    load_type2_voltages,
    parse_sample,
)
from .distribution import (
    CensoredSample,
    WeibullParams,
    apply_censoring,
    cdf,
    censor_threshold_for_p,
    log_likelihood,
    pdf,
    quantile,
    sample,
    uncensored_fraction,
)
from .divergence import kl_censored, kl_complete
from .errors import (
    ConvergenceError,
    CorrectionOvershootError,
    EstimationError,
    InsufficientDataError,
    NoSolutionError,
    SingularityError,
)
from .estimators import (
    SCALE_BIAS_C1,
    SCALE_BIAS_C2,
    SHAPE_BIAS_CONST,
    BiasAdjustment,
    EstimatorReport,
    bias_censored,
    bias_complete,
    fit_ml,
    fit_mlc,
    fit_mmle,
    fit_ross,
    lambda_from_shape,
    ml_score,
    mlc_score,
    mmle_from_ml,
    ross_from_ml,
    scale_bias_factors,
    shape_bias_factor,
)
from .simulation import CellResult, SimulationConfig, SimulationReport, run, run_cell
from .special import (
    EULER_GAMMA,
    PSI2_AT_1,
    ZETA3,
    exp_integral_ei,
    inc_gamma_deriv,
    log_gamma,
    upper_inc_gamma,
)

__version__ = "0.1.0"
