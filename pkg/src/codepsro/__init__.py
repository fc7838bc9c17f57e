"""Response-oracle equilibrium search for repeated zero-sum games.

The package contains fully testable game engines, opponent populations, a
meta-game solver, a CFR+ baseline and evaluation metrics, plus a pluggable
oracle layer that synthesizes new policies as executable programs.
"""

__version__ = "0.1.0"

from .games import MatchResult, Policy, RepeatedGameSpec, play_match
from .runtime import PolicyHandle, RuntimeConfig, spawn_code_policy

__all__ = [
    "MatchResult",
    "Policy",
    "PolicyHandle",
    "RepeatedGameSpec",
    "RuntimeConfig",
    "__version__",
    "play_match",
    "spawn_code_policy",
]
