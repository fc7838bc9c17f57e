"""CFR+ solver, exact best response, and the table-policy wrapper."""

from .best_response import (
    best_response_value,
    exploitability,
    profile_from_rule,
)
from .solver import (
    CfrPlusSolver,
    StrategyProfile,
    cfr_plus_solve,
    infoset_key,
    regret_matching_plus,
)
from .table_policy import CfrTablePolicy, as_policy, observation_infoset_key

__all__ = [
    "CfrPlusSolver",
    "CfrTablePolicy",
    "StrategyProfile",
    "as_policy",
    "best_response_value",
    "cfr_plus_solve",
    "exploitability",
    "infoset_key",
    "observation_infoset_key",
    "profile_from_rule",
    "regret_matching_plus",
]
