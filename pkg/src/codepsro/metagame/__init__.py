"""Empirical meta-game estimation, equilibrium solving and scoring."""

from .evaluate import (
    PolicyEvaluation,
    VIOLATION_LIMIT_PER_MATCH,
    evaluate_policy,
)
from .payoff import PairMatchError, PayoffMatrix, compute_payoff_matrix
from .solver import (
    MetaStrategy,
    compute_meta_equilibrium,
    meta_nashconv,
)

__all__ = [
    "MetaStrategy",
    "PairMatchError",
    "PayoffMatrix",
    "PolicyEvaluation",
    "VIOLATION_LIMIT_PER_MATCH",
    "compute_meta_equilibrium",
    "compute_payoff_matrix",
    "evaluate_policy",
    "meta_nashconv",
]
