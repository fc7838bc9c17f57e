import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from codepsro.errors import IllegalActionError, InvalidStateError
from codepsro.games.base import ANTE, BLINDS, CALL, FOLD, RAISE
from codepsro.games.leduc import (
    POSTFLOP,
    PREFLOP,
    apply_action,
    hand_rank,
    legal_actions,
    new_hand,
    observation,
    outcome_observation,
)


def play(state, actions):
    for action in actions:
        state = apply_action(state, action)
    return state


class TestGoldenTranscripts:
    """The two worked hand outcomes, replayed exactly in ante mode."""

    def test_raise_fold_returns(self):
        state = play(new_hand(("K", "J"), "Q", ANTE), [RAISE, FOLD])
        assert state.terminal
        assert state.returns == (1, -1)
        obs = outcome_observation(state, 0)
        assert obs["game_result"] == {
            "outcome": "FOLD",
            "returns": [1, -1],
            "showdown_hands": None,
        }
        assert obs["public_state"] == {
            "round": "PREFLOP",
            "chips": [101, 99],
            "pot_size": 0,
            "public_card": None,
        }

    def test_raise_war_showdown_returns(self):
        state = play(
            new_hand(("J", "K"), "Q", ANTE),
            [RAISE, RAISE, CALL, CALL, CALL],
        )
        assert state.terminal
        assert state.returns == (-5, 5)
        obs = outcome_observation(state, 0)
        assert obs["game_result"] == {
            "outcome": "SHOWDOWN",
            "returns": [-5, 5],
            "showdown_hands": [
                {"player_id": 0, "hand": "J"},
                {"player_id": 1, "hand": "K"},
            ],
        }
        assert obs["public_state"]["chips"] == [95, 105]
        assert obs["public_state"]["public_card"] == "Q"

    def test_both_call_reaches_postflop_with_pot_two(self):
        state = play(new_hand(("K", "K"), "Q", ANTE), [CALL, CALL])
        assert state.round == POSTFLOP
        assert state.pot_size == 2
        obs = observation(state, 0)
        assert obs["public_state"]["round"] == "POSTFLOP"
        assert obs["public_state"]["pot_size"] == 2
        assert obs["player_view"]["legal_actions"] == [CALL, RAISE]


class TestLegalActions:
    def test_opening_ante_actions(self):
        state = new_hand(("K", "J"), "Q", ANTE)
        assert legal_actions(state) == [CALL, RAISE]

    def test_two_raises_cap_leaves_fold_call(self):
        state = play(new_hand(("K", "J"), "Q", ANTE), [CALL, CALL, RAISE, RAISE])
        assert state.round == POSTFLOP
        assert legal_actions(state) == [FOLD, CALL]

    def test_call_always_available(self):
        state = new_hand(("K", "J"), "Q", ANTE)
        seen = [state]
        while seen:
            node = seen.pop()
            actions = legal_actions(node)
            assert actions
            assert CALL in actions
            for action in actions:
                child = apply_action(node, action)
                if not child.terminal:
                    seen.append(child)

    def test_fold_requires_outstanding_bet(self):
        state = new_hand(("K", "J"), "Q", ANTE)
        assert FOLD not in legal_actions(state)
        state = apply_action(state, RAISE)
        assert FOLD in legal_actions(state)

    def test_terminal_state_rejects_queries(self):
        state = play(new_hand(("K", "J"), "Q", ANTE), [RAISE, FOLD])
        with pytest.raises(InvalidStateError):
            legal_actions(state)
        with pytest.raises(InvalidStateError):
            apply_action(state, CALL)

    def test_illegal_action_rejected_and_state_unchanged(self):
        state = new_hand(("K", "J"), "Q", ANTE)
        with pytest.raises(IllegalActionError):
            apply_action(state, FOLD)
        assert legal_actions(state) == [CALL, RAISE]


class TestBlindsMode:
    """The small-blind/big-blind variant follows the prose walkthrough."""

    def test_opening_contributions(self):
        state = new_hand(("K", "J"), "Q", BLINDS)
        assert state.contributions == (1, 2)
        assert state.pot_size == 3

    def test_small_blind_may_fold_immediately(self):
        state = new_hand(("K", "J"), "Q", BLINDS)
        assert legal_actions(state) == [FOLD, CALL, RAISE]
        folded = apply_action(state, FOLD)
        assert folded.returns == (-1, 1)

    def test_big_blind_counts_toward_preflop_cap(self):
        state = apply_action(new_hand(("K", "J"), "Q", BLINDS), RAISE)
        # One voluntary raise reaches the cap: only call or fold remain.
        assert legal_actions(state) == [FOLD, CALL]

    def test_preflop_raise_amounts_match_walkthrough(self):
        state = apply_action(new_hand(("K", "J"), "Q", BLINDS), RAISE)
        assert state.contributions == (4, 2)

    def test_big_blind_option_to_raise_after_limp(self):
        state = apply_action(new_hand(("K", "J"), "Q", BLINDS), CALL)
        assert state.contributions == (2, 2)
        assert not state.terminal
        assert RAISE in legal_actions(state)

    def test_postflop_allows_two_raises(self):
        state = play(new_hand(("K", "J"), "Q", BLINDS), [CALL, CALL])
        assert state.round == POSTFLOP
        state = play(state, [RAISE, RAISE])
        assert legal_actions(state) == [FOLD, CALL]
        done = apply_action(state, CALL)
        assert done.terminal
        # raise ladder 4 then +4 on top of the 2-chip blinds
        assert done.contributions == (10, 10)


class TestHandRank:
    def test_pair_beats_higher_high_card(self):
        assert hand_rank("Q", "Q") > hand_rank("K", "Q")

    def test_high_card_ordering(self):
        assert hand_rank("K", "Q") > hand_rank("J", "Q")

    def test_identical_hands_tie(self):
        assert hand_rank("K", "Q") == hand_rank("K", "Q")

    def test_pairs_ordered_by_rank(self):
        assert hand_rank("K", "K") > hand_rank("Q", "Q") > hand_rank("J", "J")

    def test_unpaired_reduces_to_higher_private_card(self):
        # Shared board card: comparison must equal private-card comparison.
        ranks = {"J": 1, "Q": 2, "K": 3}
        for board in ("J", "Q", "K"):
            for mine in ("J", "Q", "K"):
                for theirs in ("J", "Q", "K"):
                    if mine == board or theirs == board or mine == theirs:
                        continue
                    assert (
                        hand_rank(mine, board) > hand_rank(theirs, board)
                    ) == (ranks[mine] > ranks[theirs])


@st.composite
def action_walks(draw):
    return draw(st.lists(st.integers(0, 2), min_size=0, max_size=12))


class TestChipConservation:
    @given(action_walks(), st.sampled_from([ANTE, BLINDS]))
    @settings(max_examples=200)
    def test_stacks_plus_pot_total_200(self, walk, stake_mode):
        state = new_hand(("K", "J"), "Q", stake_mode)
        for pick in walk:
            if state.terminal:
                break
            actions = legal_actions(state)
            state = apply_action(state, actions[pick % len(actions)])
            chips = [100 - c for c in state.contributions]
            assert chips[0] + chips[1] + state.pot_size == 200
        if state.terminal:
            assert state.returns[0] + state.returns[1] == 0

    @given(action_walks(), st.sampled_from([ANTE, BLINDS]))
    @settings(max_examples=200)
    def test_pot_equals_contribution_sum(self, walk, stake_mode):
        state = new_hand(("Q", "K"), "J", stake_mode)
        for pick in walk:
            if state.terminal:
                break
            actions = legal_actions(state)
            state = apply_action(state, actions[pick % len(actions)])
        assert state.pot_size == sum(state.contributions)


class TestObservationSchema:
    def test_midhand_observation_shape(self):
        state = apply_action(new_hand(("K", "J"), "Q", ANTE), RAISE)
        obs = observation(state, 1)
        assert list(obs) == [
            "player_view", "public_state", "action_history", "game_result",
        ]
        assert obs["player_view"] == {
            "player_id": 1,
            "current_player": True,
            "hand": "J",
            "legal_actions": [FOLD, CALL, RAISE],
        }
        assert obs["public_state"] == {
            "round": "PREFLOP",
            "chips": [97, 99],
            "pot_size": 4,
            "public_card": None,
        }
        assert obs["action_history"] == {
            "PREFLOP": [{"player_id": 0, "action": RAISE}],
            "POSTFLOP": [],
        }
        assert obs["game_result"] is None

    def test_non_actor_sees_no_legal_actions(self):
        state = apply_action(new_hand(("K", "J"), "Q", ANTE), RAISE)
        obs = observation(state, 0)
        assert obs["player_view"]["current_player"] is False
        assert obs["player_view"]["legal_actions"] == []

    def test_public_card_hidden_until_postflop(self):
        state = new_hand(("K", "J"), "Q", ANTE)
        assert observation(state, 0)["public_state"]["public_card"] is None
        state = play(state, [CALL, CALL])
        assert observation(state, 0)["public_state"]["public_card"] == "Q"

    def test_outcome_observation_requires_terminal(self):
        state = new_hand(("K", "J"), "Q", ANTE)
        with pytest.raises(InvalidStateError):
            outcome_observation(state, 0)

    def test_split_pot_on_tied_showdown(self):
        state = play(
            new_hand(("K", "K"), "Q", ANTE), [CALL, CALL, CALL, CALL]
        )
        assert state.terminal
        assert state.returns == (0, 0)
        obs = outcome_observation(state, 1)
        assert obs["public_state"]["chips"] == [100, 100]
