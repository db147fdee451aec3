"""Benchmark suite for DBN pretraining with interchangeable negative-phase samplers."""

from dbnbench.rbm import (
    EXACT_ENUM_LIMIT,
    ModelExpectations,
    RbmParams,
    SizeGuardError,
    energy,
    exact_expectations,
    hidden_conditional,
    log_likelihood,
    log_partition_exact,
    visible_conditional,
)

__all__ = [
    "EXACT_ENUM_LIMIT",
    "ModelExpectations",
    "RbmParams",
    "SizeGuardError",
    "energy",
    "exact_expectations",
    "hidden_conditional",
    "log_likelihood",
    "log_partition_exact",
    "visible_conditional",
]

__version__ = "0.1.0"
