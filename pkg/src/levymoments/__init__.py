"""Fractional-moment bounds, symbols and Monte Carlo checks for Levy-type processes."""

from .bounds import (
    check_condition,
    envelope,
    large_time_exponent,
    moment_exists,
    small_time_exponent,
)
from .estimate import (
    MomentCurve,
    SlopeFit,
    backward_moment_check,
    estimate_endpoint_moment,
    estimate_sup_moment,
    fit_large_time_slope,
    fit_small_time_slope,
    maximal_ratio_check,
    moment_growth_check,
    subadditivity_check,
    wald_check,
)
from .expressions import Expr
from .functions import MomentFunction
from .presets import load_preset, preset_names
from .simulate import SimConfig, sample_stable, simulate_levy, simulate_levy_type, simulate_paths
from .symbol import bg_index, eval_symbol, growth_constants, symbol, symbol_derivative
from .triplet import (
    CoefficientSups,
    Flags,
    JumpKernel,
    ProcessSpec,
    brownian,
    coefficient_sups,
    compound_poisson,
    gbm,
    kernel_fractional_moment,
    load_spec,
    stable,
    stable_density_constant,
    stable_like,
)

__version__ = "0.1.0"
