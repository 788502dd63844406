"""Python bindings for the buyerdyn C++ core."""

from ._core import (
    ConfigError,
    ConsistencyError,
    DomainError,
    DynamicsError,
    FixedPointKind,
    MarketState,
    basin_scan,
    classify_fixed_point,
    classify_orbit,
    eval_blended,
    eval_contagion,
    eval_feedback,
    figure,
    figure_ids,
    iterate_orbit,
    simulate,
    step,
    step_inverse,
    verify_conditions,
)

__all__ = [
    "ConfigError",
    "ConsistencyError",
    "DomainError",
    "DynamicsError",
    "FixedPointKind",
    "MarketState",
    "basin_scan",
    "classify_fixed_point",
    "classify_orbit",
    "eval_blended",
    "eval_contagion",
    "eval_feedback",
    "figure",
    "figure_ids",
    "iterate_orbit",
    "simulate",
    "step",
    "step_inverse",
    "verify_conditions",
]
