"""Exact Bayesian superiority index and conditional test for two Poisson rates."""

from .conditional_test import (
    DualityCheck,
    GridRecord,
    TestResult,
    check_duality,
    grid_compare,
    p_value,
    p_value_expressions,
)
from .estimator import PoissonRateComparison
from .index import (
    ComparisonQuery,
    Direction,
    IndexReport,
    index,
    ratio_cdf,
    ratio_pdf,
    theta_less,
)
from .mc_oracle import McEstimate, estimate_index, sample_gamma
from .model import (
    ConditionalPower,
    GammaPosterior,
    ImproperPosteriorError,
    Jeffreys,
    NonInformative,
    Observation,
    ProperGamma,
    is_integer_shape,
    posterior,
)
from .special_functions import (
    ConvergenceError,
    DomainError,
    Tolerance,
    binomial_tail,
    f_cdf,
    gauss_2f1_terminating,
    log_gamma,
    neg_binomial_cdf,
    reg_inc_beta,
)

__version__ = "0.1.0"
