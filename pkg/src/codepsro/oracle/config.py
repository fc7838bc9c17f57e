"""Configuration of the response-oracle layer."""

from __future__ import annotations

from dataclasses import dataclass, field

ZERO_SHOT = "zero_shot"
LINEAR_REFINEMENT = "linear_refinement"
EVOLUTIONARY = "evolutionary"
VARIANTS = (ZERO_SHOT, LINEAR_REFINEMENT, EVOLUTIONARY)

INPUT_CODE = "code"
INPUT_DESCRIPTION = "description"
INPUT_NONE = "none"
INPUT_MODES = (INPUT_CODE, INPUT_DESCRIPTION, INPUT_NONE)

FILTER_NONE = "none"
FILTER_TOP_K = "top_k"
FILTER_MIN_SUPPORT = "min_support"
FILTERS = (FILTER_NONE, FILTER_TOP_K, FILTER_MIN_SUPPORT)


@dataclass(frozen=True)
class EvolutionParams:
    """Island-model search parameters.

    ``temperature_scale`` multiplies the standard deviation of the island's
    scores to obtain the softmax temperature for parent sampling;
    ``rewrite_prob`` is the chance of requesting a full rewrite instead of
    a SEARCH/REPLACE mutation.
    """

    islands: int = 4
    island_capacity: int = 8
    temperature_scale: float = 0.5
    migration_period: int = 5
    eval_budget: int = 40
    rewrite_prob: float = 0.2

    def __post_init__(self):
        if self.islands < 1 or self.island_capacity < 1:
            raise ValueError("islands and island_capacity must be >= 1")
        if self.migration_period < 1:
            raise ValueError("migration_period must be >= 1")
        if self.eval_budget < 1:
            raise ValueError("eval_budget must be >= 1")
        if not 0.0 <= self.rewrite_prob <= 1.0:
            raise ValueError("rewrite_prob must be in [0, 1]")


@dataclass(frozen=True)
class OracleConfig:
    variant: str = LINEAR_REFINEMENT
    input_mode: str = INPUT_DESCRIPTION
    opponent_filter: str = FILTER_NONE
    top_k: int = 5
    min_support: float = 0.05
    refinement_budget: int = 10  # max refinement steps for linear variant
    retry_budget: int = 3  # extra attempts per generation on malformed output
    evolution: EvolutionParams = field(default_factory=EvolutionParams)

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.input_mode not in INPUT_MODES:
            raise ValueError(f"unknown input_mode {self.input_mode!r}")
        if self.opponent_filter not in FILTERS:
            raise ValueError(f"unknown filter {self.opponent_filter!r}")
        if self.refinement_budget < 0:
            raise ValueError("refinement_budget must be >= 0")
        if self.top_k < 1:
            raise ValueError("top_k must be >= 1")
        if not 0.0 < self.min_support <= 1.0:
            raise ValueError("min_support must be in (0, 1]")
        if self.retry_budget < 0:
            raise ValueError("retry_budget must be >= 0")
