"""Exact best response over a fixed finite candidate set.

A backend-free oracle: score every candidate in a fixture bank against the
current mixture and return the best (lowest index on ties). Useful as a
drop-in oracle for fixed-point tests and for running the response loop
over pure bot populations.
"""

from __future__ import annotations

from dataclasses import replace

from .controllers import OracleResult


class ExactBestResponseOracle:
    def __init__(self, candidates):
        if not candidates:
            raise ValueError("candidate set must be nonempty")
        self.candidates = list(candidates)

    def propose(
        self, game_spec, sigma, bank, evaluator, *, id_prefix="candidate",
        **_ignored,
    ) -> OracleResult:
        best = None
        evaluations = 0
        for candidate in self.candidates:
            evaluation = evaluator(candidate)
            evaluations += 1
            if best is None or evaluation.score > best[1].score:
                best = (candidate, evaluation)
        handle = replace(
            best[0],
            id=f"{id_prefix}_{best[0].id.replace('/', '_')}",
            metadata={**best[0].metadata, "registry_name": best[0].id},
        )
        return OracleResult(
            handle=handle,
            evaluation=best[1],
            n_evaluations=evaluations,
        )
