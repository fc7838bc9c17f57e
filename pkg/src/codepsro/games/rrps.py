"""Stage rules and observations for repeated rock-paper-scissors."""

from __future__ import annotations

from .base import PAPER, ROCK, RRPS_MOVES, SCISSORS

# move -> the move it beats
BEATS = {ROCK: SCISSORS, PAPER: ROCK, SCISSORS: PAPER}
# move -> the move that beats it
COUNTER = {v: k for k, v in BEATS.items()}


def stage_payoff(a: str, b: str) -> int:
    """+1 if ``a`` beats ``b``, -1 if beaten, 0 on a tie."""
    if a not in RRPS_MOVES or b not in RRPS_MOVES:
        raise ValueError(f"invalid moves ({a!r}, {b!r})")
    if a == b:
        return 0
    return 1 if BEATS[a] == b else -1


def observation(my_action: str | None, opponent_action: str | None) -> dict:
    """Previous-round view for one player; both fields None on round 0."""
    return {"my_action": my_action, "opponent_action": opponent_action}
