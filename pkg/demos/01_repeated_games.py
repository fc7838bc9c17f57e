"""The two repeated-game engines, driven by hand.

This walkthrough plays single Leduc hands action by action, shows the
observation payloads a policy receives, then runs full seeded matches of
both repeated games.
"""

from codepsro.games.base import ANTE, RepeatedGameSpec, REPEATED_LEDUC, RRPS
from codepsro.games.leduc import (
    apply_action,
    new_hand,
    observation,
    outcome_observation,
)
from codepsro.games.match import play_match
from codepsro.populations import resolve_policy

print("=== A single Leduc hand, step by step ===")
print("Both players ante 1 chip; player 0 holds K, player 1 holds J,")
print("and the face-down public card is Q.\n")

state = new_hand(("K", "J"), "Q", ANTE)
print("Opening observation for player 0:")
print(observation(state, 0), "\n")

state = apply_action(state, "RAISE")
print("Player 0 raises 2. Player 1 now sees:")
print(observation(state, 1), "\n")

state = apply_action(state, "FOLD")
print("Player 1 folds. Terminal observation (note returns [1, -1] and")
print("the pot already distributed):")
print(outcome_observation(state, 1), "\n")

print("=== A raise war that reaches showdown ===")
state = new_hand(("J", "K"), "Q", ANTE)
for action in ("RAISE", "RAISE", "CALL", "CALL", "CALL"):
    state = apply_action(state, action)
print("J vs K on a Q board after a capped pre-flop:", state.returns)
print("(the K-high hand collects 5 chips)\n")

print("=== Full repeated matches ===")
rrps = RepeatedGameSpec(RRPS)
result = play_match(
    rrps,
    resolve_policy("rrps/copybot"),
    resolve_policy("rrps/rockbot"),
    seed=42,
)
print(f"copybot vs rockbot over {rrps.num_rounds} throws: "
      f"{result.returns}")
print("(ties the first throw on its ROCK default, wins the other 999)\n")

leduc = RepeatedGameSpec(REPEATED_LEDUC)
result = play_match(
    leduc,
    resolve_policy("init/leduc_heuristic"),
    resolve_policy("leduc/always_call"),
    seed=42,
)
print(f"starter heuristic vs always-call over {leduc.num_rounds} hands: "
      f"{result.returns}")
firsts = [h["first_actor"] for h in result.transcript["hands"][:6]]
print(f"dealer alternation (first actor of hands 0-5): {firsts}")
print("\nReplaying the same seeds reproduces both matches byte for byte.")
again = play_match(
    leduc,
    resolve_policy("init/leduc_heuristic"),
    resolve_policy("leduc/always_call"),
    seed=42,
)
assert again.to_json() == result.to_json()
print("Determinism check: OK")
