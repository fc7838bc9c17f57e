"""Round-robin of the rock-paper-scissors opponent population.

Every bot is a documented heuristic with a frozen convention, so the whole
cross-table is reproducible from the seed. Shortened rounds keep this
demo quick; the `codepsro arena` subcommand runs the full version.
"""

from codepsro.games.base import RepeatedGameSpec, RRPS
from codepsro.metrics import per_opponent_returns
from codepsro.populations import bot_handle, rrps_population

spec = RepeatedGameSpec(RRPS, num_rounds=200)
bots = [bot_handle(d) for d in rrps_population()]

print(f"{len(bots)} bots, {spec.num_rounds} throws per match, "
      "2 seeded matches per pairing\n")

print(f"{'bot':<14}" + "".join(f"{b.id.split('/')[1][:7]:>9}" for b in bots))
totals = {}
for bot in bots:
    opponents = [b for b in bots if b.id != bot.id]
    stats = per_opponent_returns(bot, opponents, spec, episodes=2, seed=0)
    row = [bot.id.split("/")[1][:13]]
    total = 0.0
    for other in bots:
        if other.id == bot.id:
            row.append(f"{'-':>9}")
        else:
            mean = stats[other.id].mean
            total += mean
            row.append(f"{mean:>9.1f}")
    totals[bot.id] = total / (len(bots) - 1)
    print(f"{row[0]:<14}" + "".join(row[1:]))

print("\nMean return against the rest of the field:")
for bot_id, value in sorted(totals.items(), key=lambda kv: -kv[1]):
    bar = "#" * max(0, int(value / 10))
    print(f"  {bot_id:<18} {value:>7.1f}  {bar}")

print("\nThe adaptive predictors (markov5, freqbot2, multibot) sit on top;")
print("antiflatbot pays for guessing that everyone balances their moves.")
