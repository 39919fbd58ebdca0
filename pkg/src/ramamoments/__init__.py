"""Ramanujan sums, their k-th moment averages and the k-variable
multiplicative function f that governs them."""

from ._accel import backend
from .arith import Factorization, SieveTables, build_sieves, divisors, factorize, lcm_tuple
from .dirichlet import (
    LocalPowerSeries,
    TruncatedMultiSeries,
    dirichlet_convolve,
    extract_E,
    f_series,
    local_g_factor,
    verify_remark_local,
    zeta_factor_series,
)
from .errors import (
    ArgumentError,
    ConfigurationError,
    FitError,
    NumericalDriftError,
    RangeError,
    ResourceError,
    VerificationError,
)
from .moments import (
    FitReport,
    MomentResult,
    cauchy_schwarz_check,
    fit_log_poly,
    moment_direct,
    moment_via_divisor_identity,
    predicted_degree,
    t_average,
)
from .multivar import ExponentTuple, f_direct, f_multiplicative, f_prime_power, g_value
from .ramanujan import (
    cohen_sum,
    column_sum,
    ramanujan_sum,
    ramanujan_sum_exp_oracle,
    rh_growth_report,
)

__version__ = "0.1.0"
