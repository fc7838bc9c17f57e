"""Solving single-hand Leduc with CFR+ and playing the result.

Runs the solver with exploitability checkpoints (the exact best-response
oracle certifies every profile), then fields the frozen average strategy
as a repeated-game opponent. 2000 iterations keep the demo under a
minute; `codepsro solve-leduc` runs the full 10000.
"""

from codepsro.cfr import CfrPlusSolver, as_policy, exploitability
from codepsro.games.base import RepeatedGameSpec, REPEATED_LEDUC
from codepsro.games.match import play_match
from codepsro.populations import resolve_policy

solver = CfrPlusSolver()
print(f"single-hand Leduc: {len(solver.infoset_actions())} infosets\n")

print("iterations  exploitability (chips/hand)")
for target in (10, 100, 500, 2000):
    solver.run(target - solver.iterations_done)
    value = exploitability(solver.average_profile())
    print(f"{target:>10}  {value:.6f}")

profile = solver.average_profile()
print("\nA few averaged decisions (probabilities over legal actions):")
for key in ("p0:K:-:", "p0:J:-:", "p1:Q:-:r"):
    dist = profile.probs(key)
    pretty = ", ".join(f"{a}={p:.2f}" for a, p in dist.items())
    print(f"  {key:<12} {pretty}")

print("\nPlaying the frozen strategy for 100-hand repeated matches:")
handle = as_policy(profile)
spec = RepeatedGameSpec(REPEATED_LEDUC)
for name in ("leduc/always_call", "leduc/always_fold"):
    opponent = resolve_policy(name)
    returns = [
        play_match(spec, handle, opponent, seed).returns[0]
        for seed in range(30)
    ]
    mean = sum(returns) / len(returns)
    print(f"  vs {name:<18} mean {mean:+6.1f} chips per 100 hands")

self_returns = [
    play_match(spec, handle, handle, seed).returns[0] for seed in range(30)
]
print(f"  vs itself             mean {sum(self_returns) / 30:+6.1f} "
      "(symmetry puts this near zero)")
