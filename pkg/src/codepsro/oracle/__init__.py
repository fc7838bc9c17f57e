"""Best-response program synthesis: prompts, backends and controllers."""

from .backends import (
    HttpBackend,
    MockBackend,
    RecordingBackend,
    ScriptedBackend,
    prompt_digest,
)
from .config import (
    EVOLUTIONARY,
    EvolutionParams,
    FILTER_MIN_SUPPORT,
    FILTER_NONE,
    FILTER_TOP_K,
    INPUT_CODE,
    INPUT_DESCRIPTION,
    INPUT_NONE,
    LINEAR_REFINEMENT,
    OracleConfig,
    ZERO_SHOT,
)
from .context import (
    OpponentEntry,
    SummaryCache,
    build_opponent_context,
    filter_opponents,
    summarize_policy,
)
from .controllers import (
    OracleResult,
    evolutionary_refinement,
    linear_refinement,
    run_oracle,
    terminated,
    zero_shot,
)
from .exact import ExactBestResponseOracle
from .extract import extract_program
from .patching import Patch, PatchSet, apply_patchset, parse_patchset
from .prompts import construct_prompt, update_prompt

__all__ = [
    "EVOLUTIONARY",
    "EvolutionParams",
    "ExactBestResponseOracle",
    "FILTER_MIN_SUPPORT",
    "FILTER_NONE",
    "FILTER_TOP_K",
    "HttpBackend",
    "INPUT_CODE",
    "INPUT_DESCRIPTION",
    "INPUT_NONE",
    "LINEAR_REFINEMENT",
    "MockBackend",
    "OpponentEntry",
    "OracleConfig",
    "OracleResult",
    "Patch",
    "PatchSet",
    "RecordingBackend",
    "ScriptedBackend",
    "SummaryCache",
    "ZERO_SHOT",
    "apply_patchset",
    "build_opponent_context",
    "construct_prompt",
    "evolutionary_refinement",
    "extract_program",
    "filter_opponents",
    "linear_refinement",
    "parse_patchset",
    "prompt_digest",
    "run_oracle",
    "summarize_policy",
    "terminated",
    "update_prompt",
    "zero_shot",
]
