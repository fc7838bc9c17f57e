"""End-to-end loop behavior: fixed point, persistence, resume, accounting."""

import hashlib
import json
from pathlib import Path

import numpy as np
import pytest

from codepsro.errors import BackendError, CodePsroError
from codepsro.games.base import CallablePolicy, PAPER, ROCK, RRPS, SCISSORS
from codepsro.oracle import (
    ExactBestResponseOracle,
    MockBackend,
    OracleConfig,
    RecordingBackend,
    ScriptedBackend,
    prompt_digest,
)
from codepsro.run import (
    BackendConfig,
    RunConfig,
    export_timeseries,
    initial_policy,
    run,
)
from codepsro.runtime import PolicyHandle, RuntimeConfig


def constant_handle(name, move):
    return PolicyHandle.native(
        f"const/{name}", RRPS, lambda m=move: CallablePolicy(lambda obs: m),
        description=f"always plays {move}",
    )


def scripted_source(prompt: str) -> str:
    """Deterministic completion: a constant bot chosen by prompt hash."""
    moves = ["ROCK", "PAPER", "SCISSORS"]
    pick = int(hashlib.sha256(prompt.encode()).hexdigest(), 16) % 3
    return (
        "Here is a strategy.\n\n```python\n"
        "class Agent:\n"
        f"    MOVE = {moves[pick]!r}\n"
        "    def act(self, observation):\n"
        "        return self.MOVE\n"
        "```\n"
    )


def base_config(tmp_path, name, **kwargs):
    defaults = dict(
        game=RRPS,
        num_rounds=60,
        iterations=3,
        seed=11,
        episodes_per_pair=2,
        eval_episodes=2,
        oracle=OracleConfig(
            variant="linear_refinement",
            input_mode="code",
            refinement_budget=1,
            retry_budget=0,
        ),
        backend=BackendConfig(
            type="mock", fixture_dir=str(tmp_path / "fixtures")
        ),
        out_dir=str(tmp_path / name),
    )
    defaults.update(kwargs)
    return RunConfig(**defaults)


def tree_digest(root: Path) -> dict:
    digest = {}
    for path in sorted(root.rglob("*")):
        if path.is_file():
            digest[str(path.relative_to(root))] = hashlib.sha256(
                path.read_bytes()
            ).hexdigest()
    return digest


class TestFixedPoint:
    def test_constant_bot_restriction_converges_to_uniform(self, tmp_path):
        # The response loop over {rock, paper, scissors} must recover the
        # unique cyclic-game equilibrium by the third iteration.
        candidates = [
            constant_handle("rock", ROCK),
            constant_handle("paper", PAPER),
            constant_handle("scissors", SCISSORS),
        ]
        config = base_config(
            tmp_path, "fixedpoint", num_rounds=100, iterations=3,
            episodes_per_pair=1, eval_episodes=1,
        )
        state = run(
            config,
            oracle=ExactBestResponseOracle(candidates),
            seed_policy=candidates[0],
        )
        assert len(state.bank) == 4
        sigma3 = state.sigmas[2]
        assert len(sigma3.probs) == 3
        assert np.allclose(sigma3.probs, 1 / 3, atol=1e-3)
        # Fixed point within the bank: no member can deviate profitably.
        from codepsro.metagame import meta_nashconv

        assert meta_nashconv(sigma3, state.payoffs[2]) <= config.epsilon


class TestLoopContract:
    @pytest.fixture()
    def finished(self, tmp_path):
        fixtures = tmp_path / "fixtures"
        config = base_config(tmp_path, "contract")
        recorder = RecordingBackend(ScriptedBackend(scripted_source), fixtures)
        state = run(config, backend=recorder)
        return config, state

    def test_bank_grows_by_one_per_iteration(self, finished):
        config, state = finished
        assert len(state.bank) == config.iterations + 1

    def test_sigma_files_for_every_iteration(self, finished):
        config, state = finished
        out = Path(config.out_dir)
        for k in (1, 2, 3):
            assert (out / f"iter_{k:03d}" / "sigma.json").exists()
            assert (out / f"iter_{k:03d}" / "payoff.csv").exists()
            assert (out / f"iter_{k:03d}" / "policy.src").exists()
            assert (out / f"iter_{k:03d}" / "prompt.txt").exists()
            assert (out / f"iter_{k:03d}" / "completion.txt").exists()
        assert (out / "final" / "sigma.json").exists()

    def test_evaluation_accounting_within_budget(self, finished):
        config, state = finished
        out = Path(config.out_dir)
        limit = 1 + config.oracle.refinement_budget
        for k in (1, 2, 3):
            scores = json.loads(
                (out / f"iter_{k:03d}" / "scores.json").read_text()
            )
            assert 1 <= scores["n_evaluations"] <= limit

    def test_timeseries_row_per_iteration(self, finished):
        config, _ = finished
        ts = Path(config.out_dir) / "timeseries"
        nashconv = ts.joinpath("nashconv.csv").read_text().splitlines()
        assert nashconv[0] == "iteration,meta_nashconv"
        assert len(nashconv) == 1 + config.iterations

    def test_reexport_is_idempotent(self, finished):
        config, _ = finished
        ts = Path(config.out_dir) / "timeseries"
        before = {p.name: p.read_bytes() for p in ts.iterdir()}
        export_timeseries(config.out_dir)
        after = {p.name: p.read_bytes() for p in ts.iterdir()}
        assert before == after


class TestZeroShotAccounting:
    def test_single_iteration_spends_one_backend_call(self, tmp_path):
        config = base_config(
            tmp_path, "zeroshot", iterations=1,
            oracle=OracleConfig(
                variant="zero_shot", input_mode="code", retry_budget=0
            ),
        )
        backend = ScriptedBackend(scripted_source)
        run(config, backend=backend)
        assert backend.calls == 1


class TestDeterminismAndResume:
    def test_two_mock_runs_are_bit_identical(self, tmp_path):
        fixtures = tmp_path / "fixtures"
        config_a = base_config(tmp_path, "run_a")
        run(
            config_a,
            backend=RecordingBackend(ScriptedBackend(scripted_source),
                                     fixtures),
        )
        config_b = base_config(tmp_path, "run_b")
        run(config_b, backend=MockBackend(fixtures))
        config_c = base_config(tmp_path, "run_c")
        run(config_c, backend=MockBackend(fixtures))
        digest_b = tree_digest(Path(config_b.out_dir))
        digest_c = tree_digest(Path(config_c.out_dir))
        assert digest_b == digest_c
        # And the recorded original matches too.
        assert tree_digest(Path(config_a.out_dir)) == digest_b

    def test_interrupted_run_resumes_bit_identically(self, tmp_path):
        fixtures = tmp_path / "fixtures"
        config_a = base_config(tmp_path, "full")
        run(
            config_a,
            backend=RecordingBackend(ScriptedBackend(scripted_source),
                                     fixtures),
        )
        # Remove the fixture that iteration 3 needs, so a fresh mock run
        # dies there, leaving a checkpoint through iteration 2.
        prompt3 = (
            Path(config_a.out_dir) / "iter_003" / "prompt.txt"
        ).read_text()
        fixture3 = fixtures / f"{prompt_digest(prompt3)}.txt"
        hidden = fixture3.with_suffix(".hidden")
        fixture3.rename(hidden)

        config_b = base_config(tmp_path, "resumed")
        with pytest.raises(BackendError):
            run(config_b, backend=MockBackend(fixtures))
        out_b = Path(config_b.out_dir)
        assert (out_b / "iter_002" / "scores.json").exists()
        assert not (out_b / "iter_003" / "scores.json").exists()

        hidden.rename(fixture3)
        run(config_b, backend=MockBackend(fixtures))
        assert tree_digest(Path(config_a.out_dir)) == tree_digest(out_b)

    def test_mismatched_config_is_refused(self, tmp_path):
        fixtures = tmp_path / "fixtures"
        config = base_config(tmp_path, "locked")
        run(
            config,
            backend=RecordingBackend(ScriptedBackend(scripted_source),
                                     fixtures),
        )
        changed = base_config(tmp_path, "locked", seed=999)
        with pytest.raises(CodePsroError):
            run(changed, backend=MockBackend(fixtures))


class TestEvolutionaryEndToEnd:
    def test_evolutionary_variant_through_the_loop(self, tmp_path):
        # Exercises the real pipeline: mutation prompts, patch parsing and
        # application against actual candidate sources, island bookkeeping
        # and budget accounting, with real match-based evaluation.
        import re

        from codepsro.oracle import EvolutionParams

        cycle = {"ROCK": "PAPER", "PAPER": "SCISSORS", "SCISSORS": "ROCK"}

        def scripted(prompt):
            if "ONLY EVER RETURN CODE IN A *SEARCH/REPLACE BLOCK*!" in prompt:
                current = re.search(r"MOVE = '(\w+)'", prompt).group(1)
                return (
                    "```python\n"
                    "<<<<<<< SEARCH\n"
                    f"    MOVE = '{current}'\n"
                    "=======\n"
                    f"    MOVE = '{cycle[current]}'\n"
                    ">>>>>>> REPLACE\n"
                    "```\n"
                )
            return (
                "```python\n"
                "class Agent:\n"
                "    MOVE = 'ROCK'\n"
                "    def act(self, observation):\n"
                "        return self.MOVE\n"
                "```\n"
            )

        config = base_config(
            tmp_path, "evolution", iterations=2,
            oracle=OracleConfig(
                variant="evolutionary",
                input_mode="code",
                retry_budget=0,
                evolution=EvolutionParams(
                    islands=2, island_capacity=3, eval_budget=6,
                    migration_period=2, rewrite_prob=0.0,
                ),
            ),
        )
        state = run(config, backend=ScriptedBackend(scripted))
        assert len(state.bank) == 3
        out = Path(config.out_dir)
        for k in (1, 2):
            scores = json.loads(
                (out / f"iter_{k:03d}" / "scores.json").read_text()
            )
            assert scores["n_evaluations"] <= 6
            assert scores["kind"] == "code"
        # The mutated winners are constant bots; the meta-game over them
        # stays antisymmetric and solvable.
        assert state.final_sigma.probs.sum() == pytest.approx(1.0)


class TestInitialPolicy:
    def test_rrps_seed_policy_is_uniform(self):
        from codepsro.games.base import RepeatedGameSpec, RRPS_MOVES

        handle = initial_policy(RepeatedGameSpec(RRPS))
        policy = handle.instantiate()
        policy.reset(3)
        from collections import Counter

        counts = Counter(
            policy.act({"my_action": None, "opponent_action": None})
            for _ in range(10_000)
        )
        expected = 10_000 / 3
        chi2 = sum(
            (counts[m] - expected) ** 2 / expected for m in RRPS_MOVES
        )
        assert chi2 <= 9.21

    def test_leduc_seed_policy_semantics(self):
        from codepsro.games.base import REPEATED_LEDUC, RepeatedGameSpec

        handle = initial_policy(RepeatedGameSpec(REPEATED_LEDUC))
        policy = handle.instantiate()
        raise_obs = {
            "player_view": {"player_id": 0, "current_player": True,
                            "hand": "K",
                            "legal_actions": ["CALL", "RAISE"]},
            "public_state": {"round": "PREFLOP", "chips": [99, 99],
                             "pot_size": 2, "public_card": None},
            "action_history": {"PREFLOP": [], "POSTFLOP": []},
            "game_result": None,
        }
        assert policy.act(raise_obs) == "RAISE"
        capped = dict(raise_obs)
        capped["player_view"] = {
            "player_id": 0, "current_player": True, "hand": "J",
            "legal_actions": ["FOLD", "CALL"],
        }
        assert policy.act(capped) == "CALL"

    def test_leduc_seed_policy_uses_host_when_configured(self):
        from codepsro.games.base import REPEATED_LEDUC, RepeatedGameSpec

        runtime = RuntimeConfig(policy_host_cmd="some-host")
        handle = initial_policy(
            RepeatedGameSpec(REPEATED_LEDUC), runtime
        )
        assert handle.kind == "code"
        assert "RepeatedLeducPokerBot" in handle.source


class TestConfigFile:
    def test_yaml_round_trip_with_overrides(self, tmp_path):
        path = tmp_path / "config.yaml"
        path.write_text(
            "game: rrps\n"
            "iterations: 2\n"
            "seed: 5\n"
            "oracle:\n"
            "  variant: zero_shot\n"
            "  input_mode: none\n"
            "backend:\n"
            "  type: mock\n"
            "  fixture_dir: fx\n"
            f"out_dir: {tmp_path / 'out'}\n"
        )
        config = RunConfig.from_yaml(
            path,
            overrides={
                "oracle.variant": "linear_refinement",
                "iterations": "4",
                "oracle.evolution.islands": "2",
            },
        )
        assert config.oracle.variant == "linear_refinement"
        assert config.iterations == 4
        assert config.oracle.evolution.islands == 2
        assert config.seed == 5

    def test_unknown_keys_rejected(self, tmp_path):
        path = tmp_path / "config.yaml"
        path.write_text("game: rrps\nnot_a_key: 1\n")
        with pytest.raises(ValueError):
            RunConfig.from_yaml(path)

    def test_unknown_nested_keys_rejected(self, tmp_path):
        path = tmp_path / "config.yaml"
        path.write_text("game: rrps\noracle:\n  not_a_key: 1\n")
        with pytest.raises(ValueError, match="bad config"):
            RunConfig.from_yaml(path)
