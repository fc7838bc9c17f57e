"""The full response-oracle loop, end to end, with a scripted generator.

Each iteration estimates the meta-game, solves it, asks the "model" for a
best response to the current mixture, and grows the bank. The scripted
backend here answers every prompt with a frequency-counter program, which
is enough to watch the mixture evolve; swap in the HTTP backend for a
real model. Every artifact lands in a run directory you can inspect.
"""

import tempfile
from pathlib import Path

from codepsro.oracle import OracleConfig, ScriptedBackend
from codepsro.run import BackendConfig, RunConfig, run

COMPLETION = """\
A frequency counter should beat constant-ish mixtures.

```python
class Agent:
    COUNTER = {"ROCK": "PAPER", "PAPER": "SCISSORS", "SCISSORS": "ROCK"}

    def __init__(self):
        self.counts = {"ROCK": 0, "PAPER": 0, "SCISSORS": 0}

    def act(self, observation):
        seen = observation.get("opponent_action")
        if seen is not None:
            self.counts[seen] += 1
        best = max(self.counts, key=self.counts.get)
        return self.COUNTER[best]
```
"""

workdir = Path(tempfile.mkdtemp(prefix="loop_demo_"))
config = RunConfig(
    game="rrps",
    num_rounds=200,
    iterations=4,
    seed=7,
    episodes_per_pair=3,
    eval_episodes=3,
    oracle=OracleConfig(
        variant="linear_refinement",
        input_mode="code",
        opponent_filter="top_k",
        top_k=5,
        refinement_budget=1,
        retry_budget=0,
    ),
    backend=BackendConfig(type="mock", fixture_dir=str(workdir / "unused")),
    out_dir=str(workdir / "run"),
)

print(f"run directory: {config.out_dir}\n")
state = run(config, backend=ScriptedBackend(lambda prompt: COMPLETION))

print("iteration  nashconv   best-candidate score   sigma support")
for record, sigma in zip(state.records, state.sigmas):
    support = {
        bank_id: round(float(p), 3)
        for bank_id, p in zip(sigma.bank_ids, sigma.probs)
        if p > 0
    }
    print(f"{record.iteration:>9}  {record.nashconv:.2e}  "
          f"{record.score:>20.2f}   {support}")

print("\nfinal re-solved mixture over the grown bank:")
for bank_id, prob in zip(state.final_sigma.bank_ids,
                         state.final_sigma.probs):
    if prob > 0:
        print(f"  {bank_id:<22} {prob:.4f}")

print("\nper-iteration artifacts:")
for path in sorted((Path(config.out_dir) / "iter_001").iterdir()):
    print(f"  iter_001/{path.name}")
print("\nInterrupt a run and call `run(config)` again: it resumes from")
print("the last completed iteration and reproduces the same bytes.")
