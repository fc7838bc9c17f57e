"""Shared game vocabulary: ids, actions, match specs and results."""

from __future__ import annotations

import json
from dataclasses import dataclass

# Game identifiers.
RRPS = "rrps"
REPEATED_LEDUC = "repeated_leduc"
GAME_IDS = (RRPS, REPEATED_LEDUC)

# Rock-paper-scissors moves, in the fixed substitution order.
ROCK = "ROCK"
PAPER = "PAPER"
SCISSORS = "SCISSORS"
RRPS_MOVES = (ROCK, PAPER, SCISSORS)

# Leduc actions, in the fixed substitution order FOLD < CALL < RAISE.
FOLD = "FOLD"
CALL = "CALL"
RAISE = "RAISE"
LEDUC_ACTIONS = (FOLD, CALL, RAISE)

# Leduc stake structures.
ANTE = "ante"
BLINDS = "blinds"

LEDUC_DEFAULT_DECK = ("J", "J", "Q", "Q", "K", "K")

DEFAULT_NUM_ROUNDS = {RRPS: 1000, REPEATED_LEDUC: 100}


@dataclass(frozen=True)
class RepeatedGameSpec:
    """Which repeated game to play and for how many stage games.

    ``num_rounds`` counts throws for rock-paper-scissors and hands for
    repeated Leduc. ``stake_mode`` and ``deck`` only apply to Leduc.
    """

    game_id: str
    num_rounds: int = 0
    stake_mode: str = ANTE
    deck: tuple[str, ...] = LEDUC_DEFAULT_DECK

    def __post_init__(self):
        if self.game_id not in GAME_IDS:
            raise ValueError(f"unknown game_id {self.game_id!r}")
        if self.num_rounds == 0:
            object.__setattr__(
                self, "num_rounds", DEFAULT_NUM_ROUNDS[self.game_id]
            )
        if self.num_rounds <= 0:
            raise ValueError("num_rounds must be positive")
        if self.stake_mode not in (ANTE, BLINDS):
            raise ValueError(f"unknown stake_mode {self.stake_mode!r}")
        if self.game_id == REPEATED_LEDUC and len(self.deck) < 4:
            raise ValueError("Leduc deck needs at least four cards")


@dataclass
class MatchResult:
    """Outcome of one full match between two policies.

    ``returns`` are exactly zero-sum integers (net stage wins for RRPS, net
    chips for Leduc). ``violations`` counts substituted illegal / failed
    moves per side when the match ran in lenient mode.
    """

    returns: tuple[int, int]
    transcript: dict
    seed: int
    violations: tuple[int, int] = (0, 0)

    def to_json(self) -> str:
        payload = {
            "returns": list(self.returns),
            "violations": list(self.violations),
            "seed": self.seed,
            "transcript": self.transcript,
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "MatchResult":
        payload = json.loads(text)
        return cls(
            returns=tuple(payload["returns"]),
            transcript=payload["transcript"],
            seed=payload["seed"],
            violations=tuple(payload.get("violations", (0, 0))),
        )


class Policy:
    """One side of one match.

    Instances are per-match: ``reset`` is called once before the first
    round, ``restart`` / ``receive_outcome`` bracket each Leduc hand (they
    are never called for RRPS), and ``close`` releases any resources.
    Policies must not be shared across concurrent matches.
    """

    def reset(self, seed: int) -> None:
        pass

    def act(self, observation: dict) -> str:
        raise NotImplementedError

    def restart(self, player_id: int) -> None:
        pass

    def receive_outcome(self, observation: dict) -> None:
        pass

    def close(self) -> None:
        pass


class CallablePolicy(Policy):
    """Wrap a plain ``observation -> action`` function as a Policy."""

    def __init__(self, fn):
        self._fn = fn

    def act(self, observation: dict) -> str:
        return self._fn(observation)
