import pytest

from codepsro.games.base import CallablePolicy, PAPER, RepeatedGameSpec, RRPS
from codepsro.metrics import (
    EvalReport,
    OpponentStat,
    agg_score,
    evaluate_against_population,
    per_opponent_returns,
    pop_expl_of,
    pop_return_of,
)
from codepsro.populations import resolve_policy
from codepsro.runtime import PolicyHandle


class TestAggScore:
    def test_published_row_identity_is_exact(self):
        assert agg_score(193.2, 67.2) == 126.0

    def test_rounded_row_near_identity(self):
        assert agg_score(50.5, 25.2) == 25.3

    def test_zero_case(self):
        assert agg_score(0, 0) == 0.0


class TestAggregation:
    def test_pop_return_is_unweighted_mean(self):
        stats = {
            "a": OpponentStat(1.0, 0.0, 4),
            "b": OpponentStat(-1.0, 0.0, 4),
        }
        assert pop_return_of(stats) == 0.0

    def test_pop_expl_winning_everywhere_is_negative(self):
        stats = {
            "a": OpponentStat(10.0, 0.0, 4),
            "b": OpponentStat(3.0, 0.0, 4),
        }
        assert pop_expl_of(stats) == -3.0

    def test_pop_expl_tracks_the_worst_case(self):
        stats = {
            "a": OpponentStat(5.0, 0.0, 4),
            "b": OpponentStat(-7.0, 0.0, 4),
        }
        assert pop_expl_of(stats) == 7.0


class TestReports:
    def paper_handle(self):
        return PolicyHandle.native(
            "test/always_paper", RRPS,
            lambda: CallablePolicy(lambda obs: PAPER),
        )

    def test_pure_rockbot_population(self, rrps_spec):
        report = evaluate_against_population(
            self.paper_handle(),
            [resolve_policy("rrps/rockbot")],
            rrps_spec,
            episodes=2,
            seed=0,
        )
        assert report.pop_return == 1000.0
        assert report.pop_expl == -1000.0
        assert report.agg_score == 2000.0

    def test_internal_consistency_to_1e12(self):
        spec = RepeatedGameSpec(RRPS, num_rounds=100)
        population = [
            resolve_policy("rrps/rockbot"),
            resolve_policy("rrps/copybot"),
            resolve_policy("rrps/randbot"),
        ]
        report = evaluate_against_population(
            resolve_policy("rrps/markov5"), population, spec,
            episodes=4, seed=2,
        )
        means = [s.mean for s in report.per_opponent.values()]
        assert report.pop_return == pytest.approx(
            sum(means) / len(means), abs=1e-12
        )
        assert report.pop_expl == pytest.approx(-min(means), abs=1e-12)
        assert report.agg_score == pytest.approx(
            report.pop_return - report.pop_expl, abs=1e-12
        )

    def test_csv_shape_alphabetical_with_footer(self):
        report = EvalReport(
            agent_id="x",
            per_opponent={
                "zeta": OpponentStat(1.0, 0.1, 2),
                "alpha": OpponentStat(-2.0, 0.2, 2),
            },
            pop_return=-0.5,
            pop_expl=2.0,
            agg_score=-2.5,
        )
        lines = report.to_csv().splitlines()
        assert lines[0] == "opponent,mean_return"
        assert lines[1].startswith("alpha,")
        assert lines[2].startswith("zeta,")
        assert lines[3] == "PopReturn,-0.5"
        assert lines[4] == "PopExpl,2.0"
        assert lines[5] == "AggScore,-2.5"

    def test_randbot_mean_against_population_subset_near_zero(self):
        # randbot's expected return against any opponent is exactly zero;
        # verify the pooled estimate sits within 3 pooled stderr of it.
        spec = RepeatedGameSpec(RRPS, num_rounds=200)
        population = [
            resolve_policy(f"rrps/{name}")
            for name in ("rockbot", "copybot", "markov5", "freqbot2")
        ]
        stats = per_opponent_returns(
            resolve_policy("rrps/randbot"), population, spec,
            episodes=12, seed=6,
        )
        pooled_mean = pop_return_of(stats)
        pooled_se = (
            sum(s.stderr**2 for s in stats.values()) ** 0.5 / len(stats)
        )
        assert abs(pooled_mean) <= 3 * pooled_se

    def test_population_must_be_nonempty(self, rrps_short):
        with pytest.raises(ValueError):
            per_opponent_returns(
                resolve_policy("rrps/randbot"), [], rrps_short, 2, 0
            )

    def test_adding_a_beaten_opponent_raises_pop_return(self):
        # copybot crushes rockbot; appending rockbot to the population
        # must strictly raise PopReturn and cannot worsen the minimum.
        spec = RepeatedGameSpec(RRPS, num_rounds=100)
        agent = resolve_policy("rrps/copybot")
        population = [
            resolve_policy("rrps/randbot"),
            resolve_policy("rrps/markov5"),
        ]
        before = evaluate_against_population(
            agent, population, spec, episodes=4, seed=8
        )
        extended = population + [resolve_policy("rrps/rockbot")]
        after = evaluate_against_population(
            agent, extended, spec, episodes=4, seed=8
        )
        assert after.pop_return > before.pop_return
        assert min(s.mean for s in after.per_opponent.values()) >= min(
            s.mean for s in before.per_opponent.values()
        )
