"""Scoring a candidate policy against the current meta-strategy."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..errors import MatchError
from ..games.match import play_match
from ..seeding import derive_seed

# A candidate exceeding this many substituted moves in a single match is
# rejected outright: broken programs must not earn finite scores.
VIOLATION_LIMIT_PER_MATCH = 3


@dataclass
class PolicyEvaluation:
    """Estimated utility of a candidate against a mixture."""

    score: float
    per_opponent: dict[str, float]
    violations: dict[str, int] = field(default_factory=dict)
    rejected: bool = False

    @property
    def valid(self) -> bool:
        return not self.rejected and math.isfinite(self.score)

    def to_payload(self) -> dict:
        return {
            "score": None if not math.isfinite(self.score) else self.score,
            "per_opponent": dict(sorted(self.per_opponent.items())),
            "violations": dict(sorted(self.violations.items())),
            "rejected": self.rejected,
        }


def evaluate_policy(
    candidate,
    sigma,
    bank,
    spec,
    episodes: int,
    seed: int,
    *,
    runtime=None,
    violation_limit: int = VIOLATION_LIMIT_PER_MATCH,
) -> PolicyEvaluation:
    """Estimate the candidate's expected utility against ``sigma``.

    The utility is the sigma-weighted sum of the candidate's mean return
    against each supported bank member over ``episodes`` seeded matches
    (seats balanced). Per-opponent means are returned for feedback prompts.

    Match seeds depend only on (seed, candidate id, opponent id, episode),
    never on sigma, so evaluation is exactly linear in the mixture.

    Matches run leniently; a candidate whose substituted-move count exceeds
    ``violation_limit`` in any single match is rejected with score -inf.
    """
    by_id = {handle.id: handle for handle in bank}
    missing = [
        bank_id
        for bank_id, prob in zip(sigma.bank_ids, sigma.probs)
        if prob > 0.0 and bank_id not in by_id
    ]
    if missing:
        raise ValueError(f"sigma support not in bank: {missing}")

    score = 0.0
    per_opponent: dict[str, float] = {}
    violations: dict[str, int] = {}
    rejected = False
    for bank_id, prob in zip(sigma.bank_ids, sigma.probs):
        if prob <= 0.0:
            continue
        opponent = by_id[bank_id]
        total = 0.0
        worst = 0
        for episode in range(episodes):
            match_seed = derive_seed(
                seed, "eval", candidate.id, opponent.id, episode
            )
            try:
                if episode % 2 == 0:
                    result = play_match(
                        spec, candidate, opponent, match_seed,
                        runtime=runtime, lenient=True,
                    )
                    total += result.returns[0]
                    worst = max(worst, result.violations[0])
                else:
                    result = play_match(
                        spec, opponent, candidate, match_seed,
                        runtime=runtime, lenient=True,
                    )
                    total += result.returns[1]
                    worst = max(worst, result.violations[1])
            except MatchError as exc:
                if exc.side == (0 if episode % 2 == 0 else 1):
                    rejected = True
                    worst = violation_limit + 1
                    break
                raise
        mean = total / episodes
        per_opponent[bank_id] = mean
        violations[bank_id] = worst
        if worst > violation_limit:
            rejected = True
        score += prob * mean

    if rejected:
        score = float("-inf")
    return PolicyEvaluation(
        score=score,
        per_opponent=per_opponent,
        violations=violations,
        rejected=rejected,
    )
