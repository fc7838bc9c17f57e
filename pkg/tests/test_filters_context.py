import pytest

from codepsro.errors import BackendError
from codepsro.metagame import MetaStrategy
from codepsro.oracle import (
    OracleConfig,
    ScriptedBackend,
    SummaryCache,
    build_opponent_context,
    filter_opponents,
    summarize_policy,
)
from codepsro.games.base import RRPS
from codepsro.runtime import PolicyHandle


def sigma_of(probs):
    return MetaStrategy([f"p{i}" for i in range(len(probs))], probs)


class TestFilterOpponents:
    def test_top_k_keeps_largest_in_descending_order(self):
        sigma = sigma_of([0.5, 0.3, 0.15, 0.05])
        assert filter_opponents(sigma, "top_k", k=2) == [
            ("p0", 0.5), ("p1", 0.3),
        ]

    def test_top_k_breaks_ties_toward_lowest_index(self):
        sigma = sigma_of([0.25, 0.25, 0.25, 0.25])
        assert filter_opponents(sigma, "top_k", k=2) == [
            ("p0", 0.25), ("p1", 0.25),
        ]

    def test_min_support_threshold_is_inclusive(self):
        sigma = sigma_of([0.5, 0.4, 0.1])
        assert filter_opponents(sigma, "min_support", tau=0.1) == [
            ("p0", 0.5), ("p1", 0.4), ("p2", 0.1),
        ]

    def test_pure_sigma_with_generous_k(self):
        sigma = sigma_of([0.0, 1.0, 0.0])
        assert filter_opponents(sigma, "top_k", k=5) == [("p1", 1.0)]

    def test_none_keeps_full_support(self):
        sigma = sigma_of([0.6, 0.0, 0.4])
        assert filter_opponents(sigma, "none") == [("p0", 0.6), ("p2", 0.4)]

    def test_empty_selection_falls_back_to_largest(self):
        sigma = sigma_of([0.7, 0.2, 0.1])
        assert filter_opponents(sigma, "min_support", tau=0.9) == [
            ("p0", 0.7)
        ]


def counting_backend(text="plays rock forever"):
    calls = {"n": 0}

    def fn(prompt):
        calls["n"] += 1
        return text

    backend = ScriptedBackend(fn)
    return backend, calls


class TestSummaries:
    def test_summary_mentions_backend_text(self):
        backend, _ = counting_backend("always the same constant action")
        summary = summarize_policy("class A:\n  def act(self, o): ...", backend)
        assert "constant action" in summary

    def test_identical_source_served_from_cache(self, tmp_path):
        backend, calls = counting_backend()
        cache = SummaryCache(tmp_path / "summaries.json")
        source = "class A:\n  def act(self, o): return 'ROCK'"
        first = summarize_policy(source, backend, cache)
        second = summarize_policy(source, backend, cache)
        assert first == second
        assert calls["n"] == 1

    def test_cache_persists_across_instances(self, tmp_path):
        backend, calls = counting_backend()
        path = tmp_path / "summaries.json"
        source = "class A:\n  def act(self, o): return 'ROCK'"
        summarize_policy(source, backend, SummaryCache(path))
        summarize_policy(source, backend, SummaryCache(path))
        assert calls["n"] == 1

    def test_empty_source_is_a_precondition_error(self):
        backend, _ = counting_backend()
        with pytest.raises(ValueError):
            summarize_policy("   ", backend)

    def test_backend_failure_is_not_cached(self, tmp_path):
        attempts = {"n": 0}

        def flaky(prompt):
            attempts["n"] += 1
            raise BackendError("down")

        cache = SummaryCache(tmp_path / "summaries.json")
        with pytest.raises(BackendError):
            summarize_policy(
                "class A:\n  def act(self, o): ...",
                ScriptedBackend(flaky),
                cache,
                retries=1,
            )
        good, calls = counting_backend()
        assert summarize_policy(
            "class A:\n  def act(self, o): ...", good, cache
        )
        assert calls["n"] == 1  # failure did not poison the cache


class TestOpponentContext:
    def make_bank(self):
        code = PolicyHandle.from_source(
            "bank/coded", RRPS,
            "class Agent:\n    def act(self, obs):\n        return 'ROCK'\n",
        )
        native = PolicyHandle.native(
            "bank/native", RRPS, object, description="always rock"
        )
        return [code, native]

    def test_code_mode_embeds_sources(self):
        bank = self.make_bank()
        sigma = MetaStrategy([h.id for h in bank], [0.5, 0.5])
        entries = build_opponent_context(
            sigma, bank, OracleConfig(input_mode="code")
        )
        assert entries[0].payload == bank[0].source
        assert "always rock" in entries[1].payload

    def test_description_mode_summarizes_code(self):
        backend, calls = counting_backend("beats nothing")
        bank = self.make_bank()
        sigma = MetaStrategy([h.id for h in bank], [0.5, 0.5])
        entries = build_opponent_context(
            sigma, bank, OracleConfig(input_mode="description"),
            backend=backend,
        )
        assert entries[0].payload == "beats nothing"
        assert calls["n"] == 1  # native opponents use their description

    def test_none_mode_is_empty(self):
        bank = self.make_bank()
        sigma = MetaStrategy([h.id for h in bank], [1.0, 0.0])
        assert build_opponent_context(
            sigma, bank, OracleConfig(input_mode="none")
        ) == []
