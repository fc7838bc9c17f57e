"""Single-hand Leduc hold'em engine.

The hand is a pure state machine: ``apply_action`` returns a fresh state and
never mutates its input, so the same transitions drive live matches, tree
solvers and exhaustive tests.

Two stake structures are supported:

* ``ante`` (default): both players ante 1 chip, raise sizes are 2 pre-flop
  and 4 post-flop, and each betting round allows at most two raises.
* ``blinds``: position 0 posts a small blind of 1, position 1 a big blind
  of 2. The big blind counts as the first raise of the pre-flop round, so
  only one voluntary raise fits under the two-raise cap there; the
  post-flop round allows two raises as usual.

Position 0 acts first in both rounds. Each player starts a hand with a
stack of 100 chips, so the stacks plus the pot always total 200.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from ..errors import IllegalActionError, InvalidStateError
from .base import ANTE, BLINDS, CALL, FOLD, RAISE

PREFLOP = "PREFLOP"
POSTFLOP = "POSTFLOP"

STARTING_STACK = 100
MAX_RAISES_PER_ROUND = 2
RAISE_SIZE = {PREFLOP: 2, POSTFLOP: 4}
CARD_RANK = {"J": 1, "Q": 2, "K": 3}

FOLD_OUTCOME = "FOLD"
SHOWDOWN_OUTCOME = "SHOWDOWN"

ACTION_LETTER = {FOLD: "f", CALL: "c", RAISE: "r"}


@dataclass(frozen=True)
class LeducHandState:
    private_cards: tuple[str, str]
    public_card: str
    stake_mode: str = ANTE
    round: str = PREFLOP
    contributions: tuple[int, int] = (0, 0)
    raises_this_round: int = 0
    history: tuple[tuple[int, str], ...] = ()  # (player, action) in order
    preflop_len: int = 0  # prefix of history belonging to the pre-flop round
    current_player: int = 0
    terminal: bool = False
    outcome: str | None = None
    returns: tuple[int, int] | None = None

    @property
    def pot_size(self) -> int:
        return sum(self.contributions)

    def round_history(self, round_name: str) -> tuple[tuple[int, str], ...]:
        if round_name == PREFLOP:
            return self.history[: self.preflop_len]
        return self.history[self.preflop_len:]

    def revealed_public_card(self) -> str | None:
        return self.public_card if self.round == POSTFLOP else None


def new_hand(
    private_cards: tuple[str, str],
    public_card: str,
    stake_mode: str = ANTE,
) -> LeducHandState:
    for card in (*private_cards, public_card):
        if card not in CARD_RANK:
            raise ValueError(f"unknown card {card!r}")
    if stake_mode == ANTE:
        contributions = (1, 1)
        raises = 0
    elif stake_mode == BLINDS:
        contributions = (1, 2)
        raises = 1  # the big blind consumes one raise of the pre-flop cap
    else:
        raise ValueError(f"unknown stake_mode {stake_mode!r}")
    return LeducHandState(
        private_cards=tuple(private_cards),
        public_card=public_card,
        stake_mode=stake_mode,
        contributions=contributions,
        raises_this_round=raises,
    )


def legal_actions(state: LeducHandState) -> list[str]:
    """Actions available to the player to act, ordered FOLD, CALL, RAISE."""
    if state.terminal:
        raise InvalidStateError("hand is over; no legal actions")
    to_call = max(state.contributions) - state.contributions[state.current_player]
    actions = []
    if to_call > 0:
        actions.append(FOLD)
    actions.append(CALL)
    if state.raises_this_round < MAX_RAISES_PER_ROUND:
        actions.append(RAISE)
    return actions


def apply_action(state: LeducHandState, action: str) -> LeducHandState:
    if state.terminal:
        raise InvalidStateError("hand is over; cannot act")
    if action not in legal_actions(state):
        raise IllegalActionError(
            f"{action!r} is not legal in state {betting_string(state)!r}"
        )

    player = state.current_player
    other = 1 - player
    to_call = max(state.contributions) - state.contributions[player]
    round_actions_before = len(state.round_history(state.round))
    history = state.history + ((player, action),)
    preflop_len = (
        len(history) if state.round == PREFLOP else state.preflop_len
    )

    if action == FOLD:
        # The winner recovers their own contribution plus the loser's.
        lost = state.contributions[player]
        returns = [0, 0]
        returns[other] = lost
        returns[player] = -lost
        return replace(
            state,
            history=history,
            preflop_len=preflop_len,
            terminal=True,
            outcome=FOLD_OUTCOME,
            returns=tuple(returns),
        )

    contributions = list(state.contributions)
    raises = state.raises_this_round
    if action == CALL:
        contributions[player] += to_call
    else:  # RAISE
        contributions[player] += to_call + RAISE_SIZE[state.round]
        raises += 1

    # A call closes the round unless it opened the round at zero cost.
    closes = action == CALL and round_actions_before >= 1
    if not closes:
        return replace(
            state,
            contributions=tuple(contributions),
            raises_this_round=raises,
            history=history,
            preflop_len=preflop_len,
            current_player=other,
        )

    if state.round == PREFLOP:
        return replace(
            state,
            contributions=tuple(contributions),
            raises_this_round=0,
            history=history,
            preflop_len=preflop_len,
            round=POSTFLOP,
            current_player=0,
        )

    # Post-flop betting closed: showdown.
    ranks = [
        hand_rank(state.private_cards[p], state.public_card) for p in (0, 1)
    ]
    if ranks[0] == ranks[1]:
        returns = (0, 0)
    else:
        winner = 0 if ranks[0] > ranks[1] else 1
        stake = contributions[1 - winner]
        returns = (stake, -stake) if winner == 0 else (-stake, stake)
    return replace(
        state,
        contributions=tuple(contributions),
        history=history,
        preflop_len=preflop_len,
        terminal=True,
        outcome=SHOWDOWN_OUTCOME,
        returns=returns,
    )


def hand_rank(private_card: str, public_card: str) -> tuple[int, int]:
    """Comparable strength of private + public at showdown.

    Any pair outranks any non-pair, pairs order K > Q > J, and unpaired
    hands compare as (high card, kicker), which reduces to the higher
    private card when neither player pairs the board.
    """
    private = CARD_RANK[private_card]
    public = CARD_RANK[public_card]
    if private == public:
        return (3 + private, 0)
    return (max(private, public), min(private, public))


def betting_string(state: LeducHandState) -> str:
    """Compact action history, e.g. ``'cr/c'`` (rounds joined by '/')."""
    pre = "".join(ACTION_LETTER[a] for _, a in state.round_history(PREFLOP))
    if state.round == PREFLOP:
        return pre
    post = "".join(ACTION_LETTER[a] for _, a in state.round_history(POSTFLOP))
    return f"{pre}/{post}"


def _history_payload(state: LeducHandState) -> dict:
    return {
        PREFLOP: [
            {"player_id": p, "action": a}
            for p, a in state.round_history(PREFLOP)
        ],
        POSTFLOP: [
            {"player_id": p, "action": a}
            for p, a in state.round_history(POSTFLOP)
        ],
    }


def observation(state: LeducHandState, viewer: int) -> dict:
    """Mid-hand view for ``viewer``; matches the wire schema exactly."""
    if state.terminal:
        return outcome_observation(state, viewer)
    acting = viewer == state.current_player
    return {
        "player_view": {
            "player_id": viewer,
            "current_player": acting,
            "hand": state.private_cards[viewer],
            "legal_actions": legal_actions(state) if acting else [],
        },
        "public_state": {
            "round": state.round,
            "chips": [
                STARTING_STACK - state.contributions[0],
                STARTING_STACK - state.contributions[1],
            ],
            "pot_size": state.pot_size,
            "public_card": state.revealed_public_card(),
        },
        "action_history": _history_payload(state),
        "game_result": None,
    }


def outcome_observation(state: LeducHandState, viewer: int) -> dict:
    """Terminal view for ``viewer``: pot distributed, result attached."""
    if not state.terminal:
        raise InvalidStateError("hand is not over")
    returns = state.returns
    if state.outcome == SHOWDOWN_OUTCOME:
        showdown_hands = [
            {"player_id": 0, "hand": state.private_cards[0]},
            {"player_id": 1, "hand": state.private_cards[1]},
        ]
    else:
        showdown_hands = None
    return {
        "player_view": {
            "player_id": viewer,
            "current_player": False,
            "hand": state.private_cards[viewer],
            "legal_actions": [],
        },
        "public_state": {
            "round": state.round,
            "chips": [
                STARTING_STACK + returns[0],
                STARTING_STACK + returns[1],
            ],
            "pot_size": 0,
            "public_card": state.revealed_public_card(),
        },
        "action_history": _history_payload(state),
        "game_result": {
            "outcome": state.outcome,
            "returns": list(returns),
            "showdown_hands": showdown_hands,
        },
    }
