"""Heuristic Leduc opponents and the native port of the starter bot."""

from __future__ import annotations

from ..games.base import CALL, FOLD, Policy, RAISE, REPEATED_LEDUC
from ..games.leduc import CARD_RANK
from .rrps_bots import BotDescriptor


class AlwaysCall(Policy):
    """Returns CALL in every state (CALL is always legal)."""

    def act(self, observation: dict) -> str:
        return CALL


class AlwaysFold(Policy):
    """Folds whenever folding is legal and otherwise calls."""

    def act(self, observation: dict) -> str:
        legal = observation["player_view"]["legal_actions"]
        return FOLD if FOLD in legal else CALL


class LeducHeuristicBot(Policy):
    """Native port of the shipped starter code policy.

    Card-strength rules only, no opponent modeling: pre-flop it raises a
    King when possible and otherwise calls (folding only when calling is
    impossible, which never happens in practice); post-flop it raises with
    a pair or when its private card beats the board and check-calls
    otherwise. Kept action-for-action identical to the shipped source so
    the two can be differential-tested against each other.
    """

    def act(self, observation: dict) -> str:
        view = observation.get("player_view", {})
        public = observation.get("public_state", {})
        legal = view.get("legal_actions", [])
        if not legal:
            return CALL
        hand = view.get("hand")
        round_name = public.get("round")
        if round_name == "PREFLOP":
            return self._preflop(hand, legal)
        if round_name == "POSTFLOP":
            return self._postflop(hand, public.get("public_card"), legal)
        return CALL if CALL in legal else legal[0]

    def _preflop(self, hand, legal):
        strength = CARD_RANK.get(hand, 0)
        if strength == 3:
            return RAISE if RAISE in legal else CALL
        return CALL if CALL in legal else FOLD

    def _postflop(self, hand, public_card, legal):
        strength = CARD_RANK.get(hand, 0)
        board = CARD_RANK.get(public_card, 0)
        if hand == public_card or strength > board:
            return RAISE if RAISE in legal else CALL
        return CALL if CALL in legal else FOLD


def leduc_heuristics() -> list[BotDescriptor]:
    """AlwaysCall and AlwaysFold, the two scripted evaluation opponents."""
    return [
        BotDescriptor(
            name="always_call",
            game_id=REPEATED_LEDUC,
            description="calls every decision",
            factory=AlwaysCall,
        ),
        BotDescriptor(
            name="always_fold",
            game_id=REPEATED_LEDUC,
            description="folds whenever legal, otherwise calls",
            factory=AlwaysFold,
        ),
    ]
