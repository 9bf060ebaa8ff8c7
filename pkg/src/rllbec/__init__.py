"""Feedback capacity and zero-error coding for run-length limited
binary erasure channels."""

from .capacity import (
    BudgetExceeded,
    CapacityResult,
    DomainError,
    SchemeParams,
    capacity_12,
    delta_chain,
    fb_upper_2inf,
    feedback_capacity,
    grid_argmax_rate,
    grid_max_rate,
    h2,
    nc_capacity_d_inf,
    rate,
    stationarity_residual,
    ub_12_two_param,
)
from .codec import (
    TILDE0,
    EmptySet,
    MessageInterval,
    MessageOutsideLiveSet,
    SchemeSession,
    UseBudgetExceeded,
    input_bit,
    label_names,
    label_of,
    next_label,
    partition,
    transmit_message,
    update_live,
)
from .constraint import (
    INF,
    IllegalEdge,
    RllConstraint,
    adjacency,
    first_violation,
    initial_state,
    next_state,
    noiseless_capacity,
    validate_sequence,
)
from .markov import (
    FiniteChain,
    NoConvergence,
    build_labeling_chain,
    build_s_chain,
    s_chain_stationary_exact,
    stationary,
)
from .sim import (
    BecChannel,
    SimReport,
    label_occupancy_check,
    renewal_rate_d_inf,
    run_feedback_sim,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded", "CapacityResult", "DomainError", "SchemeParams",
    "capacity_12", "delta_chain", "fb_upper_2inf", "feedback_capacity",
    "grid_argmax_rate", "grid_max_rate", "h2", "nc_capacity_d_inf", "rate",
    "stationarity_residual", "ub_12_two_param",
    "TILDE0", "EmptySet", "MessageInterval", "MessageOutsideLiveSet",
    "SchemeSession", "UseBudgetExceeded", "input_bit", "label_names",
    "label_of", "next_label", "partition", "transmit_message", "update_live",
    "INF", "IllegalEdge", "RllConstraint", "adjacency", "first_violation",
    "initial_state", "next_state", "noiseless_capacity", "validate_sequence",
    "FiniteChain", "NoConvergence", "build_labeling_chain", "build_s_chain",
    "s_chain_stationary_exact", "stationary",
    "BecChannel", "SimReport", "label_occupancy_check", "renewal_rate_d_inf",
    "run_feedback_sim",
    "__version__",
]
