"""Causal-region calculus and screening-off checks on small causal models."""
from .causal_order import (
    CausalSet,
    CycleError,
    NotSpacelike,
    Region,
    build_causal_set,
)
from .minkowski import Box, Bound, MinkRegion, normalize
from .regionexpr import format_region, parse_region
from .stochastic import (
    CheckReport,
    FactorizationFailure,
    FullSpecification,
    StochasticCausalModel,
    ZeroConditioningEvent,
    check_condition,
    correlation,
    factor_full_specification,
    full_specifications,
    validate_model,
)

__version__ = "0.1.0"
