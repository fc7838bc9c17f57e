"""Deterministic prompt construction for both games.

A prompt is assembled from fixed template texts (shipped as package data)
plus optional sections: the opponent context, the current program under
``# Current program``, a per-opponent feedback table, the SEARCH/REPLACE
rules, and a final ``# Task`` directive. Construction is pure: identical
inputs produce byte-identical prompts, and opponent sources are embedded
verbatim.
"""

from __future__ import annotations

from ..data import leduc_prompt_template, patch_rules_text, rrps_prompt_template
from ..errors import PromptTemplateError
from ..games.base import REPEATED_LEDUC, RRPS
from .config import INPUT_NONE, OracleConfig
from .context import OpponentEntry

CURRENT_PROGRAM_HEADER = "# Current program"
OPPONENTS_HEADER = "# Opponents"
FEEDBACK_HEADER = "# Feedback"
TASK_HEADER = "# Task"

_WRITE_TASKS = {
    RRPS: (
        "Write a complete `Agent` class implementing a strategy that "
        "maximizes expected return against the opponent mixture above."
    ),
    REPEATED_LEDUC: (
        "Write a complete `RepeatedLeducPokerBot` class implementing a "
        "strategy that maximizes expected return against the opponent "
        "mixture above."
    ),
}
_IMPROVE_TASK = (
    "Improve the current program so that its score against the opponent "
    "mixture increases."
)
_RETURN_FULL = "Return the full program in a single fenced code block."
_RETURN_PATCH = (
    "Describe each change with a *SEARCH/REPLACE block*.\n"
    "ONLY EVER RETURN CODE IN A *SEARCH/REPLACE BLOCK*!"
)


def _preamble(game_spec) -> str:
    if game_spec.game_id == RRPS:
        text = rrps_prompt_template()
        if game_spec.num_rounds != 1000:
            text = text.replace("1000 rounds", f"{game_spec.num_rounds} rounds")
        return text
    return leduc_prompt_template()


def _render_opponents(opponents: list[OpponentEntry]) -> str:
    parts = [
        OPPONENTS_HEADER,
        "Here are the summary of opponent codes you are trying to beat:",
        "",
    ]
    total = len(opponents)
    for index, entry in enumerate(opponents, start=1):
        parts.append(
            f"## Opponent {index} of {total}: {entry.bank_id} "
            f"(mixture probability {entry.prob:.6f})"
        )
        if entry.payload and entry.payload.lstrip().startswith(
            ("class ", "import ", "from ", "def ")
        ):
            parts.append("```python")
            parts.append(entry.payload)
            parts.append("```")
        else:
            parts.append(entry.payload or "")
        parts.append("")
    parts.append(
        "Try to reason about these opponents, and come up with a strategy "
        "that can exploit them in general."
    )
    return "\n".join(parts)


def _render_feedback(feedback) -> str:
    if feedback.score == float("-inf"):
        score_line = (
            "Estimated utility of the current program against the opponent "
            "mixture: rejected (the program failed to produce legal actions)"
        )
    else:
        score_line = (
            "Estimated utility of the current program against the opponent "
            f"mixture: {feedback.score:.6f}"
        )
    lines = [FEEDBACK_HEADER, score_line, "Per-opponent mean returns:"]
    for bank_id in sorted(feedback.per_opponent):
        lines.append(f"- {bank_id}: {feedback.per_opponent[bank_id]:.6f}")
    return "\n".join(lines)


def construct_prompt(
    game_spec,
    sigma=None,
    bank=None,
    config: OracleConfig | None = None,
    *,
    opponents: list[OpponentEntry] | None = None,
    current_program: str | None = None,
    feedback=None,
    mutation: bool = False,
) -> str:
    """Build the full oracle prompt.

    Callers either pass prebuilt ``opponents`` entries, or ``sigma`` +
    ``bank`` + ``config`` for code-mode construction (description mode
    needs summaries prepared up front via ``build_opponent_context``).
    ``mutation=True`` asks for SEARCH/REPLACE output instead of a full
    program and requires ``current_program``.
    """
    config = config or OracleConfig()
    if opponents is None:
        if config.input_mode == INPUT_NONE:
            opponents = []
        else:
            missing = [
                name
                for name, value in (("sigma", sigma), ("bank", bank))
                if value is None
            ]
            if missing:
                raise PromptTemplateError(missing)
            from .context import build_opponent_context

            opponents = build_opponent_context(sigma, bank, config)
    if config.input_mode != INPUT_NONE and not opponents:
        raise PromptTemplateError(["opponents"])
    if mutation and not current_program:
        raise PromptTemplateError(["current_program"])
    if feedback is not None and current_program is None:
        raise PromptTemplateError(["current_program"])

    sections = [_preamble(game_spec).rstrip()]
    if current_program is not None:
        sections.append(
            f"{CURRENT_PROGRAM_HEADER}\n"
            "Here is the current program we are trying to improve (you "
            "will need to propose a modification to it below):\n\n"
            f"```python\n{current_program}\n```"
        )
    if opponents:
        sections.append(_render_opponents(opponents))
    if feedback is not None:
        sections.append(_render_feedback(feedback))
    include_patch_rules = mutation or game_spec.game_id == REPEATED_LEDUC
    if include_patch_rules:
        sections.append(patch_rules_text().rstrip())
    if current_program is not None:
        task = _IMPROVE_TASK
    else:
        task = _WRITE_TASKS[game_spec.game_id]
    how = _RETURN_PATCH if mutation else _RETURN_FULL
    sections.append(f"{TASK_HEADER}\n{task}\n{how}")
    return "\n\n".join(sections) + "\n"


def update_prompt(prompt: str, program: str, feedback) -> str:
    """Re-target an existing prompt at a new current program and feedback.

    Everything from ``# Current program`` (or, failing that, ``# Task``)
    onward is replaced; the final directive asks for a full regenerated
    program. This mirrors rebuilding the prompt from scratch with the new
    program embedded.
    """
    for marker in (
        f"\n{CURRENT_PROGRAM_HEADER}\n",
        f"\n{OPPONENTS_HEADER}\n",
        f"\n{TASK_HEADER}\n",
    ):
        cut = prompt.find(marker)
        if cut >= 0:
            break
    if cut < 0:
        raise PromptTemplateError(["task section"])
    head = prompt[:cut].rstrip()
    opponents_block = _extract_section(prompt, OPPONENTS_HEADER)
    rules_block = _extract_section(prompt, "# *SEARCH/REPLACE block* Rules:")
    sections = [
        head,
        f"{CURRENT_PROGRAM_HEADER}\n"
        "Here is the current program we are trying to improve (you "
        "will need to propose a modification to it below):\n\n"
        f"```python\n{program}\n```",
    ]
    if opponents_block:
        sections.append(opponents_block)
    sections.append(_render_feedback(feedback))
    if rules_block:
        sections.append(rules_block)
    sections.append(f"{TASK_HEADER}\n{_IMPROVE_TASK}\n{_RETURN_FULL}")
    return "\n\n".join(sections) + "\n"


def _extract_section(prompt: str, header: str) -> str | None:
    start = prompt.find(f"\n{header}\n")
    if start < 0:
        return None
    start += 1
    end = len(prompt)
    for other in (
        CURRENT_PROGRAM_HEADER,
        FEEDBACK_HEADER,
        "# *SEARCH/REPLACE block* Rules:",
        TASK_HEADER,
    ):
        if other == header:
            continue
        pos = prompt.find(f"\n{other}\n", start)
        if 0 <= pos < end:
            end = pos
    return prompt[start:end].rstrip()
