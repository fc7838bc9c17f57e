"""Play a solved strategy profile as a repeated-game policy."""

from __future__ import annotations

import random

from ..games.base import REPEATED_LEDUC, Policy
from ..runtime.handles import CFR_TABLE, PolicyHandle
from .solver import StrategyProfile, infoset_key


def observation_infoset_key(observation: dict) -> str:
    """Rebuild the solver's infoset key from a live observation."""
    view = observation["player_view"]
    public_state = observation["public_state"]
    history = observation["action_history"]
    pre = "".join(e["action"][0].lower() for e in history["PREFLOP"])
    if public_state["round"] == "POSTFLOP":
        post = "".join(e["action"][0].lower() for e in history["POSTFLOP"])
        hist = f"{pre}/{post}"
        public = public_state["public_card"]
    else:
        hist = pre
        public = None
    return infoset_key(view["player_id"], view["hand"], public, hist)


class CfrTablePolicy(Policy):
    """Samples actions from a strategy profile, stateless across hands.

    Sampling uses the match's seeded stream, so matches against this
    policy are reproducible.
    """

    def __init__(self, profile: StrategyProfile):
        self._profile = profile
        self._rng = random.Random(0)

    def reset(self, seed: int) -> None:
        self._rng = random.Random(seed)

    def act(self, observation: dict) -> str:
        key = observation_infoset_key(observation)
        dist = self._profile.probs(key)  # MissingInfosetError if unknown
        legal = observation["player_view"]["legal_actions"]
        draw = self._rng.random()
        acc = 0.0
        for action in legal:
            acc += dist.get(action, 0.0)
            if draw < acc:
                return action
        return legal[-1]


def as_policy(
    profile: StrategyProfile, handle_id: str = "cfr/leduc"
) -> PolicyHandle:
    """Wrap a profile as a playable CFR_TABLE handle."""
    return PolicyHandle(
        id=handle_id,
        kind=CFR_TABLE,
        game_id=REPEATED_LEDUC,
        factory=lambda: CfrTablePolicy(profile),
        metadata={"infosets": len(profile)},
    )
