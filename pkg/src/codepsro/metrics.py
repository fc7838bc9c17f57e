"""Population-based evaluation: PopReturn, PopExpl and AggScore."""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass
from decimal import Decimal

from .games.match import play_match
from .seeding import derive_seed

DEFAULT_EPISODES = 20


@dataclass(frozen=True)
class OpponentStat:
    mean: float
    stderr: float
    episodes: int


@dataclass
class EvalReport:
    """Per-opponent returns plus the three aggregate numbers."""

    agent_id: str
    per_opponent: dict[str, OpponentStat]
    pop_return: float
    pop_expl: float
    agg_score: float

    def to_json(self) -> str:
        payload = {
            "agent_id": self.agent_id,
            "per_opponent": {
                name: {
                    "mean_return": stat.mean,
                    "stderr": stat.stderr,
                    "episodes": stat.episodes,
                }
                for name, stat in sorted(self.per_opponent.items())
            },
            "pop_return": self.pop_return,
            "pop_expl": self.pop_expl,
            "agg_score": self.agg_score,
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        """Opponent table (alphabetical) with aggregate footer rows."""
        out = io.StringIO()
        out.write("opponent,mean_return\n")
        for name in sorted(self.per_opponent):
            out.write(f"{name},{self.per_opponent[name].mean!r}\n")
        out.write(f"PopReturn,{self.pop_return!r}\n")
        out.write(f"PopExpl,{self.pop_expl!r}\n")
        out.write(f"AggScore,{self.agg_score!r}\n")
        return out.getvalue()


def agg_score(pop_return: float, pop_expl: float) -> float:
    """PopReturn minus PopExpl, exact in decimal.

    The two inputs are reported decimal quantities; subtracting their
    shortest decimal readings avoids binary-float artifacts (for example
    193.2 - 67.2 must be 126.0, not 125.99999999999999).
    """
    return float(Decimal(repr(pop_return)) - Decimal(repr(pop_expl)))


def per_opponent_returns(
    agent, population, spec, episodes: int, seed: int, *, runtime=None,
) -> dict[str, OpponentStat]:
    """Mean return of ``agent`` against each population member.

    Seats are balanced across episodes; seeds depend only on the agent and
    opponent ids plus the episode index.
    """
    if not population:
        raise ValueError("population must be nonempty")
    stats = {}
    for opponent in population:
        returns = []
        for episode in range(episodes):
            match_seed = derive_seed(
                seed, "popeval", agent.id, opponent.id, episode
            )
            if episode % 2 == 0:
                result = play_match(
                    spec, agent, opponent, match_seed,
                    runtime=runtime, lenient=True,
                )
                returns.append(result.returns[0])
            else:
                result = play_match(
                    spec, opponent, agent, match_seed,
                    runtime=runtime, lenient=True,
                )
                returns.append(result.returns[1])
        mean = sum(returns) / len(returns)
        if len(returns) > 1:
            var = sum((r - mean) ** 2 for r in returns) / (len(returns) - 1)
            stderr = math.sqrt(var / len(returns))
        else:
            stderr = 0.0
        stats[opponent.id] = OpponentStat(mean, stderr, episodes)
    return stats


def pop_return_of(stats: dict[str, OpponentStat]) -> float:
    """Unweighted mean of the per-opponent means."""
    return sum(s.mean for s in stats.values()) / len(stats)


def pop_expl_of(stats: dict[str, OpponentStat]) -> float:
    """Negated minimum per-opponent mean (worst-case exposure)."""
    return -min(s.mean for s in stats.values())


def pop_return(
    agent, population, spec, episodes: int = DEFAULT_EPISODES,
    seed: int = 0, *, runtime=None,
) -> float:
    return pop_return_of(
        per_opponent_returns(
            agent, population, spec, episodes, seed, runtime=runtime
        )
    )


def pop_expl(
    agent, population, spec, episodes: int = DEFAULT_EPISODES,
    seed: int = 0, *, runtime=None,
) -> float:
    return pop_expl_of(
        per_opponent_returns(
            agent, population, spec, episodes, seed, runtime=runtime
        )
    )


def evaluate_against_population(
    agent, population, spec, episodes: int = DEFAULT_EPISODES,
    seed: int = 0, *, runtime=None,
) -> EvalReport:
    """One simulation pass feeding all three metrics consistently."""
    stats = per_opponent_returns(
        agent, population, spec, episodes, seed, runtime=runtime
    )
    pr = pop_return_of(stats)
    pe = pop_expl_of(stats)
    return EvalReport(
        agent_id=agent.id,
        per_opponent=stats,
        pop_return=pr,
        pop_expl=pe,
        agg_score=agg_score(pr, pe),
    )
