"""The full loop on repeated Leduc, scripted end to end."""

import json
from pathlib import Path

import pytest

from codepsro.errors import MatchError, PolicyLoadError
from codepsro.games.base import REPEATED_LEDUC, RepeatedGameSpec
from codepsro.metagame import MetaStrategy, evaluate_policy
from codepsro.oracle import OracleConfig, ScriptedBackend
from codepsro.populations import resolve_policy
from codepsro.run import BackendConfig, RunConfig, run
from codepsro.runtime import PolicyHandle

CAUTIOUS_BOT = """\
class RepeatedLeducPokerBot:
    def __init__(self):
        self.player_id = -1

    def restart(self, player_id):
        self.player_id = player_id

    def receive_outcome(self, obs):
        pass

    def act(self, obs):
        legal = obs["player_view"]["legal_actions"]
        hand = obs["player_view"]["hand"]
        if hand == "K" and "RAISE" in legal:
            return "RAISE"
        return "CALL"
"""


def test_leduc_loop_with_scripted_backend(tmp_path):
    config = RunConfig(
        game=REPEATED_LEDUC,
        num_rounds=8,
        iterations=2,
        seed=2,
        episodes_per_pair=2,
        eval_episodes=2,
        oracle=OracleConfig(
            variant="zero_shot", input_mode="code", retry_budget=0
        ),
        backend=BackendConfig(
            type="mock", fixture_dir=str(tmp_path / "unused")
        ),
        out_dir=str(tmp_path / "leduc_run"),
    )
    backend = ScriptedBackend(
        lambda prompt: f"```python\n{CAUTIOUS_BOT}```"
    )
    state = run(config, backend=backend)
    assert len(state.bank) == 3
    assert state.bank[0].id == "init/leduc_heuristic"
    # The Leduc prompt carried the rules and patch blocks.
    prompt = (
        Path(config.out_dir) / "iter_001" / "prompt.txt"
    ).read_text()
    assert "Leduc Poker" in prompt
    assert "# *SEARCH/REPLACE block* Rules:" in prompt
    # Generated policies entered the bank as playable code handles.
    scores = json.loads(
        (Path(config.out_dir) / "iter_002" / "scores.json").read_text()
    )
    assert scores["kind"] == "code"
    assert scores["score"] is not None


class TestCandidateCrashPaths:
    def test_candidate_that_cannot_start_is_rejected(self, leduc_short):
        # Loads fine, explodes in the constructor: every match aborts at
        # reset, which the evaluator must convert into a rejection.
        source = (
            "raised = []\n"
            "class RepeatedLeducPokerBot:\n"
            "    def __init__(self):\n"
            "        raise RuntimeError('cannot boot')\n"
            "    def act(self, obs):\n"
            "        return 'CALL'\n"
        )
        candidate = PolicyHandle.from_source(
            "test/boom", REPEATED_LEDUC, source
        )
        bank = [resolve_policy("leduc/always_call")]
        sigma = MetaStrategy([bank[0].id], [1.0])
        result = evaluate_policy(
            candidate, sigma, bank, leduc_short, episodes=2, seed=0
        )
        assert result.rejected
        assert result.score == float("-inf")

    def test_broken_opponent_propagates_instead(self, leduc_short):
        source = (
            "class RepeatedLeducPokerBot:\n"
            "    def __init__(self):\n"
            "        raise RuntimeError('cannot boot')\n"
            "    def act(self, obs):\n"
            "        return 'CALL'\n"
        )
        broken_opponent = PolicyHandle.from_source(
            "bank/boom", REPEATED_LEDUC, source
        )
        sigma = MetaStrategy([broken_opponent.id], [1.0])
        with pytest.raises(MatchError):
            evaluate_policy(
                resolve_policy("leduc/always_call"),
                sigma,
                [broken_opponent],
                leduc_short,
                episodes=2,
                seed=0,
            )

    def test_unloadable_source_fails_at_handle_creation(self):
        from codepsro.runtime import spawn_code_policy

        with pytest.raises(PolicyLoadError):
            spawn_code_policy("import missing_module_xyz\n", REPEATED_LEDUC)
