"""Sharpened lower and upper bounds on the Jensen gap E[phi(X)] - phi(E[X])."""

from ._core import (
    Distribution,
    Error,
    Function,
    GapBounds,
    GapEstimate,
    NumericError,
    PowerMeanBracket,
    UsageError,
    bound,
    curvature_bound,
    custom_function,
    gap,
    h,
    partition,
    power_mean_bound,
    run_cli,
    sample_bound,
)

__all__ = [
    "Distribution",
    "Error",
    "Function",
    "GapBounds",
    "GapEstimate",
    "NumericError",
    "PowerMeanBracket",
    "UsageError",
    "bound",
    "curvature_bound",
    "custom_function",
    "gap",
    "h",
    "partition",
    "power_mean_bound",
    "run_cli",
    "sample_bound",
]
