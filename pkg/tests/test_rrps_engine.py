import pytest
from hypothesis import given
from hypothesis import strategies as st

from codepsro.games.base import PAPER, ROCK, RRPS_MOVES, SCISSORS
from codepsro.games.rrps import COUNTER, observation, stage_payoff


def test_rock_beats_scissors():
    assert stage_payoff(ROCK, SCISSORS) == 1


def test_tie_is_zero():
    assert stage_payoff(PAPER, PAPER) == 0


def test_antisymmetry_of_first_example():
    assert stage_payoff(SCISSORS, ROCK) == -1


@given(
    st.sampled_from(RRPS_MOVES),
    st.sampled_from(RRPS_MOVES),
)
def test_stage_payoff_antisymmetric(a, b):
    assert stage_payoff(a, b) == -stage_payoff(b, a)
    assert stage_payoff(a, b) in (-1, 0, 1)


def test_cyclic_dominance():
    for move in RRPS_MOVES:
        assert stage_payoff(COUNTER[move], move) == 1


def test_invalid_move_rejected():
    with pytest.raises(ValueError):
        stage_payoff("LIZARD", ROCK)


def test_first_round_observation_has_both_fields_absent():
    assert observation(None, None) == {
        "my_action": None,
        "opponent_action": None,
    }


def test_observation_carries_previous_round():
    assert observation(ROCK, PAPER) == {
        "my_action": ROCK,
        "opponent_action": PAPER,
    }
