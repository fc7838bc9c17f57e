"""Opponent context for prompts: support filtering and code summaries."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

from ..errors import BackendError
from .config import (
    FILTER_MIN_SUPPORT,
    FILTER_NONE,
    FILTER_TOP_K,
    INPUT_CODE,
    INPUT_NONE,
    OracleConfig,
)


@dataclass(frozen=True)
class OpponentEntry:
    """One opponent as it will appear in a prompt."""

    bank_id: str
    prob: float
    payload: str | None  # source text or description; None in NONE mode


def filter_opponents(sigma, mode: str, *, k: int = 5, tau: float = 0.05):
    """Select which support members enter the prompt.

    ``top_k`` keeps the k largest-probability members (ties broken toward
    the lowest bank index) in descending probability; ``min_support``
    keeps every member with probability >= tau (inclusive) in bank order;
    ``none`` keeps the full support. The result is never empty: an empty
    selection falls back to the single largest-probability member.
    """
    entries = [
        (i, bank_id, float(p))
        for i, (bank_id, p) in enumerate(zip(sigma.bank_ids, sigma.probs))
        if p > 0.0
    ]
    if not entries:
        raise ValueError("sigma has empty support")
    if mode == FILTER_NONE:
        chosen = entries
    elif mode == FILTER_TOP_K:
        ranked = sorted(entries, key=lambda e: (-e[2], e[0]))
        chosen = ranked[:k]
    elif mode == FILTER_MIN_SUPPORT:
        chosen = [e for e in entries if e[2] >= tau]
    else:
        raise ValueError(f"unknown filter {mode!r}")
    if not chosen:
        chosen = [min(entries, key=lambda e: (-e[2], e[0]))]
    return [(bank_id, p) for _, bank_id, p in chosen]


class SummaryCache:
    """Persistent cache of policy summaries keyed by content hash.

    Entries are keyed by (backend id, sha256 of the source), so identical
    sources never hit the backend twice and failures never poison the
    cache.
    """

    def __init__(self, path=None):
        self._path = Path(path) if path else None
        self._entries: dict[str, str] = {}
        if self._path and self._path.exists():
            self._entries = json.loads(self._path.read_text())

    @staticmethod
    def key_for(backend_id: str, source: str) -> str:
        digest = hashlib.sha256(source.encode("utf-8")).hexdigest()
        return f"{backend_id}:{digest}"

    def get(self, backend_id: str, source: str) -> str | None:
        return self._entries.get(self.key_for(backend_id, source))

    def put(self, backend_id: str, source: str, summary: str) -> None:
        self._entries[self.key_for(backend_id, source)] = summary
        if self._path:
            self._path.parent.mkdir(parents=True, exist_ok=True)
            self._path.write_text(
                json.dumps(self._entries, indent=2, sort_keys=True) + "\n"
            )


SUMMARY_PROMPT = """\
Analyze the following game policy implementation and summarize, in a short
paragraph of plain language, the strategy it plays: what it conditions on,
how it exploits opponents, and any weaknesses. Do not include code.

```python
{source}
```
"""


def summarize_policy(
    source: str, backend, cache: SummaryCache | None = None,
    retries: int = 2,
) -> str:
    """Natural-language description of a code policy, cached by content."""
    if not source or not source.strip():
        raise ValueError("cannot summarize an empty source")
    if cache is not None:
        hit = cache.get(backend.backend_id, source)
        if hit is not None:
            return hit
    last = None
    for _ in range(retries + 1):
        try:
            summary = backend.complete(
                SUMMARY_PROMPT.format(source=source)
            ).strip()
        except BackendError as exc:
            last = exc
            continue
        if summary:
            if cache is not None:
                cache.put(backend.backend_id, source, summary)
            return summary
        last = BackendError("backend returned an empty summary")
    raise BackendError(f"could not summarize policy: {last}")


def build_opponent_context(
    sigma,
    bank,
    config: OracleConfig,
    backend=None,
    cache: SummaryCache | None = None,
) -> list[OpponentEntry]:
    """Filtered opponents with payloads matching the configured input mode.

    Code policies contribute their source (code mode) or a cached summary
    (description mode, one backend call per new source). Built-in policies
    have no source; their registry description stands in for both modes.
    """
    if config.input_mode == INPUT_NONE:
        return []
    by_id = {handle.id: handle for handle in bank}
    selected = filter_opponents(
        sigma,
        config.opponent_filter,
        k=config.top_k,
        tau=config.min_support,
    )
    entries = []
    for bank_id, prob in selected:
        handle = by_id[bank_id]
        if handle.source:
            if config.input_mode == INPUT_CODE:
                payload = handle.source
            else:
                if backend is None:
                    raise ValueError(
                        "description mode needs a backend to summarize"
                    )
                payload = summarize_policy(handle.source, backend, cache)
        else:
            payload = "(built-in policy) " + str(
                handle.metadata.get("description", handle.id)
            )
        entries.append(
            OpponentEntry(bank_id=bank_id, prob=prob, payload=payload)
        )
    return entries
