"""Deterministic engines for the two repeated games."""

from .base import (
    ANTE,
    BLINDS,
    CALL,
    CallablePolicy,
    FOLD,
    GAME_IDS,
    LEDUC_ACTIONS,
    LEDUC_DEFAULT_DECK,
    MatchResult,
    PAPER,
    Policy,
    RAISE,
    REPEATED_LEDUC,
    ROCK,
    RRPS,
    RRPS_MOVES,
    RepeatedGameSpec,
    SCISSORS,
)
from .match import play_match

__all__ = [
    "ANTE",
    "BLINDS",
    "CALL",
    "CallablePolicy",
    "FOLD",
    "GAME_IDS",
    "LEDUC_ACTIONS",
    "LEDUC_DEFAULT_DECK",
    "MatchResult",
    "PAPER",
    "Policy",
    "RAISE",
    "REPEATED_LEDUC",
    "ROCK",
    "RRPS",
    "RRPS_MOVES",
    "RepeatedGameSpec",
    "SCISSORS",
    "play_match",
]
