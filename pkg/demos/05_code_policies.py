"""Policies as program text: spawning, prompting, patching.

A code policy is just source. This demo validates and plays one, shows
the prompt the oracle would build around it, and applies a SEARCH/REPLACE
mutation of the kind the evolutionary controller requests.
"""

from codepsro.games.base import RepeatedGameSpec, RRPS
from codepsro.games.match import play_match
from codepsro.metagame import MetaStrategy
from codepsro.oracle import (
    OracleConfig,
    apply_patchset,
    build_opponent_context,
    construct_prompt,
    parse_patchset,
)
from codepsro.populations import resolve_policy
from codepsro.runtime import spawn_code_policy

SOURCE = '''\
class Agent:
    """Counters whatever the opponent played last; opens with PAPER."""

    COUNTER = {"ROCK": "PAPER", "PAPER": "SCISSORS", "SCISSORS": "ROCK"}

    def act(self, observation):
        last = observation.get("opponent_action")
        if last is None:
            return "PAPER"
        return self.COUNTER[last]
'''

print("=== Spawning a code policy ===")
handle = spawn_code_policy(SOURCE, RRPS, handle_id="demo/counterbot")
spec = RepeatedGameSpec(RRPS, num_rounds=100)
result = play_match(spec, handle, resolve_policy("rrps/rockbot"), 0)
print(f"counterbot vs rockbot: {result.returns} "
      "(ROCK loses to the counter every round after the opener)\n")

print("=== The prompt the oracle builds around the bank ===")
bank = [handle, resolve_policy("rrps/rockbot")]
sigma = MetaStrategy([h.id for h in bank], [0.7, 0.3])
config = OracleConfig(input_mode="code", opponent_filter="top_k", top_k=5)
opponents = build_opponent_context(sigma, bank, config)
prompt = construct_prompt(spec, config=config, opponents=opponents)
head = "\n".join(prompt.splitlines()[:12])
print(head)
print(f"... [{len(prompt)} characters total; sources embedded verbatim]\n")

print("=== Mutating the program with a SEARCH/REPLACE block ===")
completion = """\
The opener is predictable; randomize it.

```python
<<<<<<< SEARCH
        if last is None:
            return "PAPER"
=======
        if last is None:
            import random
            return random.choice(["ROCK", "PAPER", "SCISSORS"])
>>>>>>> REPLACE
```
"""
patchset = parse_patchset(completion)
mutated = apply_patchset(SOURCE, patchset)
print("after the patch, the opener reads:")
for line in mutated.splitlines():
    if "random" in line or "last is None" in line:
        print(" ", line)
child = spawn_code_policy(mutated, RRPS, handle_id="demo/counterbot_v2")
result = play_match(spec, child, resolve_policy("rrps/rockbot"), 0)
print(f"\nmutated counterbot vs rockbot: {result.returns}")
print("Patched programs are validated before they ever enter a match.")
