"""Exact-match SEARCH/REPLACE patch blocks.

Block format (fences around blocks are tolerated and ignored):

    <<<<<<< SEARCH
    lines to find, character for character
    =======
    lines to substitute
    >>>>>>> REPLACE

Each block replaces *all* matching occurrences; blocks apply in order, so
later blocks see earlier blocks' output. Application is atomic: any
unmatched SEARCH text raises and the input program is returned unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import PatchApplyError, PatchParseError

SEARCH_MARKER = "<<<<<<< SEARCH"
DIVIDER = "======="
REPLACE_MARKER = ">>>>>>> REPLACE"


@dataclass(frozen=True)
class Patch:
    search: str
    replace: str


@dataclass(frozen=True)
class PatchSet:
    blocks: tuple[Patch, ...]

    def __len__(self) -> int:
        return len(self.blocks)


def parse_patchset(text: str) -> PatchSet:
    """Collect every well-formed SEARCH/REPLACE block in ``text``."""
    lines = text.split("\n")
    blocks = []
    i = 0
    while i < len(lines):
        if lines[i].strip() != SEARCH_MARKER:
            i += 1
            continue
        search_lines: list[str] = []
        replace_lines: list[str] = []
        i += 1
        while i < len(lines) and lines[i].strip() != DIVIDER:
            search_lines.append(lines[i])
            i += 1
        if i >= len(lines):
            raise PatchParseError("SEARCH block without a ======= divider")
        i += 1
        while i < len(lines) and lines[i].strip() != REPLACE_MARKER:
            replace_lines.append(lines[i])
            i += 1
        if i >= len(lines):
            raise PatchParseError("patch block without a REPLACE terminator")
        i += 1
        search = "\n".join(search_lines)
        if not search:
            raise PatchParseError("SEARCH text must be nonempty")
        blocks.append(Patch(search=search, replace="\n".join(replace_lines)))
    if not blocks:
        raise PatchParseError("no SEARCH/REPLACE blocks found")
    return PatchSet(tuple(blocks))


def apply_patchset(program: str, patchset: PatchSet) -> str:
    """Apply blocks in order, replacing every occurrence of each SEARCH."""
    result = program
    for index, patch in enumerate(patchset.blocks):
        if patch.search not in result:
            raise PatchApplyError(
                index, f"search text not found: {patch.search[:80]!r}"
            )
        result = result.replace(patch.search, patch.replace)
    return result
