"""Data-independent P-greedy center selection for kernel interpolation.

The package selects centers from a discretized domain by repeatedly picking
the maximizer of the Power Function, maintained incrementally through the
Newton basis, and provides the tools to measure and fit the resulting decay.
"""

from pgreedy.errors import (
    BreakdownError,
    ConditioningError,
    ConfigError,
    DegenerateInputError,
    ExhaustedError,
    InputError,
    InsufficientDataError,
    PGreedyError,
)
from pgreedy.geometry import discretize_ball, fill_distance
from pgreedy.greedy import (
    GreedyState,
    GreedyTrace,
    StopCriteria,
    init_state,
    newton_column,
    run_pgreedy,
    select_next,
    update_power,
)
from pgreedy.interpolate import (
    Interpolant,
    build_interpolant,
    direct_solve,
    evaluate_interpolant,
    newton_coefficients,
    power_function_direct,
    residual_native_norm,
)
from pgreedy.kernel import (
    KernelSpec,
    SmoothnessClass,
    eval_kernel,
    eval_radial,
    kernel_column,
    kernel_matrix,
)
from pgreedy.rates import (
    RateFit,
    fit_algebraic,
    fit_exponential,
    fit_fill_decay,
    theorem4_constants,
    theoretical_curve,
)

__version__ = "0.1.0"

__all__ = [
    "BreakdownError",
    "ConditioningError",
    "ConfigError",
    "DegenerateInputError",
    "ExhaustedError",
    "GreedyState",
    "GreedyTrace",
    "InputError",
    "InsufficientDataError",
    "Interpolant",
    "KernelSpec",
    "PGreedyError",
    "RateFit",
    "SmoothnessClass",
    "StopCriteria",
    "build_interpolant",
    "direct_solve",
    "discretize_ball",
    "eval_kernel",
    "eval_radial",
    "evaluate_interpolant",
    "fill_distance",
    "fit_algebraic",
    "fit_exponential",
    "fit_fill_decay",
    "init_state",
    "kernel_column",
    "kernel_matrix",
    "newton_coefficients",
    "newton_column",
    "power_function_direct",
    "residual_native_norm",
    "run_pgreedy",
    "select_next",
    "theorem4_constants",
    "theoretical_curve",
    "update_power",
]
