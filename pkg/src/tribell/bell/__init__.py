"""Bell-operator evaluation, optimization and closed-form bounds."""

from .bounds import (
    bound_b1_b3,
    bound_b2,
    bound_b4,
    bound_b5,
    bound_rho4,
    bound_rho5,
    bound_table2,
    chsh_pure_max,
    ns99_mixed_bound,
    visibility_threshold_ns99,
    visibility_threshold_svetlichny,
)
from .operators import (
    CLASSICAL_BOUND,
    N_PARTIES,
    TERMS,
    BellKind,
    MeasurementScenario,
    behavior_operator_value,
    canonicalize_angles,
    correlation_tensors,
    correlator,
    make_batched_value,
    operator_value,
)
from .optimize import (
    OptimizeOptions,
    ViolationReport,
    optimize_operator,
)

__all__ = [
    "BellKind",
    "CLASSICAL_BOUND",
    "MeasurementScenario",
    "N_PARTIES",
    "OptimizeOptions",
    "TERMS",
    "ViolationReport",
    "behavior_operator_value",
    "bound_b1_b3",
    "bound_b2",
    "bound_b4",
    "bound_b5",
    "bound_rho4",
    "bound_rho5",
    "bound_table2",
    "canonicalize_angles",
    "chsh_pure_max",
    "correlation_tensors",
    "correlator",
    "make_batched_value",
    "ns99_mixed_bound",
    "operator_value",
    "optimize_operator",
    "visibility_threshold_ns99",
    "visibility_threshold_svetlichny",
]
