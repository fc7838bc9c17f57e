"""Pulling a program out of a model completion."""

from __future__ import annotations

import re

from ..errors import MalformedGenerationError

_FENCE = re.compile(r"```[a-zA-Z0-9_+-]*[ \t]*\n(.*?)```", re.DOTALL)
_CODE_HINTS = ("class ", "def ", "import ", "from ")


def extract_program(llm_text: str) -> str:
    """Return the largest fenced code block; bare code as a fallback.

    Completions without fences are accepted only if they look like code
    (contain a class/def/import); anything else is a malformed generation
    and should trigger a retry.
    """
    if llm_text is None:
        raise MalformedGenerationError("empty completion")
    blocks = [m.group(1) for m in _FENCE.finditer(llm_text)]
    if blocks:
        program = max(blocks, key=len).strip()
        if not program:
            raise MalformedGenerationError("fenced block is empty")
        return program
    stripped = llm_text.strip()
    if not stripped:
        raise MalformedGenerationError("empty completion")
    if not any(hint in stripped for hint in _CODE_HINTS):
        raise MalformedGenerationError(
            "completion contains no code block and no code indicators"
        )
    return stripped
