"""Population bots: documented semantics, golden transcripts, legality."""

from collections import Counter

import pytest

from codepsro.games.base import PAPER, RepeatedGameSpec, ROCK, RRPS, RRPS_MOVES
from codepsro.games.match import play_match
from codepsro.games.rrps import COUNTER
from codepsro.populations import bot_handle, resolve_policy, rrps_population

REQUIRED_BOTS = {
    "randbot", "rockbot", "copybot", "rotatebot", "pibot", "freqbot2",
    "driftbot", "antiflatbot", "switchbot", "flatbot3", "multibot",
    "markov5",
}

# First 12 moves of each bot against rotatebot, match seed 99. These pin
# the frozen first-move and tie-breaking conventions described in each
# bot's docstring.
GOLDEN_VS_ROTATEBOT = {
    "randbot": ["SCISSORS", "PAPER", "ROCK", "ROCK", "PAPER", "SCISSORS",
                "PAPER", "ROCK", "PAPER", "ROCK", "SCISSORS", "ROCK"],
    "rockbot": ["ROCK"] * 12,
    "copybot": ["ROCK", "PAPER", "SCISSORS", "ROCK", "PAPER", "SCISSORS",
                "ROCK", "PAPER", "SCISSORS", "ROCK", "PAPER", "SCISSORS"],
    "rotatebot": ["ROCK", "PAPER", "SCISSORS", "ROCK", "PAPER", "SCISSORS",
                  "ROCK", "PAPER", "SCISSORS", "ROCK", "PAPER", "SCISSORS"],
    "pibot": ["ROCK", "PAPER", "PAPER", "PAPER", "SCISSORS", "ROCK",
              "SCISSORS", "ROCK", "SCISSORS", "ROCK", "SCISSORS",
              "SCISSORS"],
    "freqbot2": ["PAPER"] * 12,
    "driftbot": ["SCISSORS", "SCISSORS", "PAPER", "ROCK", "ROCK", "PAPER",
                 "PAPER", "ROCK", "ROCK", "SCISSORS", "ROCK", "SCISSORS"],
    "antiflatbot": ["PAPER", "SCISSORS", "ROCK", "PAPER", "SCISSORS",
                    "ROCK", "PAPER", "SCISSORS", "ROCK", "PAPER",
                    "SCISSORS", "ROCK"],
    "switchbot": ["SCISSORS", "PAPER", "ROCK", "PAPER", "SCISSORS",
                  "PAPER", "ROCK", "SCISSORS", "ROCK", "PAPER", "SCISSORS",
                  "PAPER"],
    "flatbot3": ["SCISSORS", "PAPER", "ROCK", "ROCK", "SCISSORS", "PAPER",
                 "ROCK", "SCISSORS", "PAPER", "SCISSORS", "ROCK", "PAPER"],
    "multibot": ["ROCK", "PAPER", "PAPER", "ROCK", "PAPER", "PAPER",
                 "ROCK", "PAPER", "PAPER", "ROCK", "PAPER", "PAPER"],
    "markov5": ["SCISSORS", "PAPER", "ROCK", "ROCK", "PAPER", "SCISSORS",
                "PAPER", "ROCK", "ROCK", "PAPER", "SCISSORS", "ROCK"],
}


def test_population_has_the_documented_bots():
    bots = rrps_population()
    assert len(bots) >= 12
    assert {d.name for d in bots} >= REQUIRED_BOTS
    assert len({d.name for d in bots}) == len(bots)  # names unique


def test_every_bot_has_a_description():
    for descriptor in rrps_population():
        assert descriptor.description.strip()


def test_rockbot_emits_rock_for_all_rounds(rrps_spec):
    result = play_match(
        rrps_spec,
        resolve_policy("rrps/rockbot"),
        resolve_policy("rrps/randbot"),
        0,
    )
    assert all(a == ROCK for a, _ in result.transcript["rounds"])
    assert len(result.transcript["rounds"]) == 1000


def test_copybot_beats_rockbot_after_round_one(rrps_spec):
    result = play_match(
        rrps_spec,
        resolve_policy("rrps/copybot"),
        resolve_policy("rrps/rockbot"),
        123,
    )
    # Ties round 1 under the documented ROCK default, wins all 999 others.
    assert result.returns == (999, -999)


def test_copybot_rule_semantics(rrps_short):
    result = play_match(
        rrps_short,
        resolve_policy("rrps/copybot"),
        resolve_policy("rrps/randbot"),
        5,
    )
    rounds = result.transcript["rounds"]
    assert rounds[0][0] == ROCK
    for (prev_mine, prev_opp), (mine, _) in zip(rounds, rounds[1:]):
        assert mine == COUNTER[prev_opp]


@pytest.mark.parametrize("name", sorted(GOLDEN_VS_ROTATEBOT))
def test_golden_transcripts(name):
    spec = RepeatedGameSpec(RRPS, num_rounds=12)
    result = play_match(
        spec,
        resolve_policy(f"rrps/{name}"),
        resolve_policy("rrps/rotatebot"),
        99,
    )
    assert [a for a, _ in result.transcript["rounds"]] == (
        GOLDEN_VS_ROTATEBOT[name]
    )


@pytest.mark.parametrize("descriptor", rrps_population(),
                         ids=lambda d: d.name)
def test_bots_always_emit_legal_moves(descriptor):
    # Fuzz each bot against an adversarial mix of opponents and seeds.
    spec = RepeatedGameSpec(RRPS, num_rounds=60)
    bot = bot_handle(descriptor)
    for opponent_name in ("randbot", "switchbot", "markov5"):
        for seed in range(4):
            result = play_match(
                spec, bot, resolve_policy(f"rrps/{opponent_name}"), seed
            )
            assert result.violations == (0, 0)
            assert all(
                a in RRPS_MOVES for a, _ in result.transcript["rounds"]
            )


@pytest.mark.parametrize("descriptor", rrps_population(),
                         ids=lambda d: d.name)
def test_bots_deterministic_given_seed(descriptor):
    spec = RepeatedGameSpec(RRPS, num_rounds=40)
    bot = bot_handle(descriptor)
    opponent = resolve_policy("rrps/randbot")
    first = play_match(spec, bot, opponent, 77)
    second = play_match(spec, bot, opponent, 77)
    assert first.transcript == second.transcript


def test_randbot_marginal_uniform_chi_square():
    # 10^4 draws; chi-square with 2 dof at the 99% level is 9.21.
    bot = resolve_policy("rrps/randbot").instantiate()
    bot.reset(2024)
    counts = Counter(
        bot.act({"my_action": None, "opponent_action": None})
        for _ in range(10_000)
    )
    expected = 10_000 / 3
    chi2 = sum(
        (counts[m] - expected) ** 2 / expected for m in RRPS_MOVES
    )
    assert chi2 <= 9.21


def test_randbot_mirror_mean_near_zero():
    # 100 seeded matches; the mean return should sit within 3 standard
    # errors of zero by symmetry.
    spec = RepeatedGameSpec(RRPS, num_rounds=100)
    a = resolve_policy("rrps/randbot")
    b = resolve_policy("rrps/randbot")
    returns = [
        play_match(spec, a, b, seed).returns[0] for seed in range(100)
    ]
    mean = sum(returns) / len(returns)
    var = sum((r - mean) ** 2 for r in returns) / (len(returns) - 1)
    stderr = (var / len(returns)) ** 0.5
    assert abs(mean) <= 3 * stderr + 1e-9


def test_antiflatbot_is_maximally_exploited_by_constants(rrps_spec):
    # Against rockbot it locks onto the wrong forecast and loses nearly
    # every round, mirroring its role as an exploitability probe.
    result = play_match(
        rrps_spec,
        resolve_policy("rrps/antiflatbot"),
        resolve_policy("rrps/rockbot"),
        0,
    )
    assert result.returns[0] <= -990


def test_pibot_sequence_is_fixed_across_opponents():
    spec = RepeatedGameSpec(RRPS, num_rounds=30)
    first = play_match(
        spec, resolve_policy("rrps/pibot"), resolve_policy("rrps/rockbot"), 1
    )
    second = play_match(
        spec, resolve_policy("rrps/pibot"), resolve_policy("rrps/randbot"), 2
    )
    assert [a for a, _ in first.transcript["rounds"]] == [
        a for a, _ in second.transcript["rounds"]
    ]


def test_switchbot_never_repeats_its_move(rrps_short):
    result = play_match(
        rrps_short,
        resolve_policy("rrps/switchbot"),
        resolve_policy("rrps/randbot"),
        13,
    )
    moves = [a for a, _ in result.transcript["rounds"]]
    assert all(x != y for x, y in zip(moves, moves[1:]))


def test_flatbot3_keeps_own_distribution_flat():
    spec = RepeatedGameSpec(RRPS, num_rounds=99)
    result = play_match(
        spec,
        resolve_policy("rrps/flatbot3"),
        resolve_policy("rrps/randbot"),
        21,
    )
    counts = Counter(a for a, _ in result.transcript["rounds"])
    assert max(counts.values()) - min(counts.values()) <= 1


def test_markov5_exploits_a_periodic_opponent(rrps_spec):
    # rotatebot's period-3 pattern is trivially predictable for an
    # order-5 model; markov5 should win by a wide margin.
    result = play_match(
        rrps_spec,
        resolve_policy("rrps/markov5"),
        resolve_policy("rrps/rotatebot"),
        3,
    )
    assert result.returns[0] >= 900


def test_freqbot2_beats_rockbot(rrps_spec):
    result = play_match(
        rrps_spec,
        resolve_policy("rrps/freqbot2"),
        resolve_policy("rrps/rockbot"),
        0,
    )
    assert result.returns[0] == 1000
