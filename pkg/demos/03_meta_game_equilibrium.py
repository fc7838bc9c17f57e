"""From matches to a meta-game and its equilibrium mixture.

Estimate the empirical payoff matrix over a small policy bank, solve for
the symmetric equilibrium, and certify it with the best-deviation value.
"""

import numpy as np

from codepsro.games.base import RepeatedGameSpec, RRPS
from codepsro.metagame import (
    compute_meta_equilibrium,
    compute_payoff_matrix,
    evaluate_policy,
    meta_nashconv,
)
from codepsro.populations import resolve_policy

spec = RepeatedGameSpec(RRPS, num_rounds=300)
bank = [
    resolve_policy("rrps/rockbot"),
    resolve_policy("rrps/copybot"),
    resolve_policy("rrps/randbot"),
    resolve_policy("rrps/freqbot2"),
]

print("Estimating the payoff matrix (20 seeded matches per pair)...")
matrix = compute_payoff_matrix(bank, spec, episodes_per_pair=20, seed=0)
print("\nbank:", matrix.bank_ids)
print("U (antisymmetric, zero diagonal):")
print(np.round(matrix.values, 1))
print("standard errors:")
print(np.round(matrix.stderr, 2))

sigma = compute_meta_equilibrium(matrix)
print("\nEquilibrium mixture:")
for bank_id, prob in zip(sigma.bank_ids, sigma.probs):
    print(f"  {bank_id:<16} {prob:.4f}")
certificate = meta_nashconv(sigma, matrix)
print(f"certificate (best deviation within the bank): {certificate:.2e}")

print("\nScoring a would-be best response against the mixture:")
candidate = resolve_policy("rrps/markov5")
evaluation = evaluate_policy(
    candidate, sigma, bank, spec, episodes=10, seed=1
)
print(f"  markov5 utility vs sigma: {evaluation.score:+.1f}")
for opponent, mean in sorted(evaluation.per_opponent.items()):
    print(f"    vs {opponent:<16} {mean:+8.1f}")
print("\nA positive utility means the bank is still exploitable; the")
print("response loop would append this candidate and re-solve.")
