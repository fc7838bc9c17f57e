"""Empirical payoff-matrix estimation over a policy bank."""

from __future__ import annotations

import io
import json
import math

import numpy as np

from ..errors import MatchError
from ..games.match import play_match
from ..seeding import derive_seed


class PairMatchError(MatchError):
    """A match inside payoff estimation failed; names the pair."""

    def __init__(self, id_a, id_b, cause):
        super().__init__(cause.side, cause.round_index, cause.reason, cause)
        self.pair = (id_a, id_b)
        self.args = (f"match {id_a} vs {id_b} failed: {cause}",)


class PayoffMatrix:
    """Estimated meta-game payoffs; antisymmetric with a zero diagonal."""

    def __init__(self, bank_ids, values, stderr, episodes_per_pair):
        self.bank_ids = list(bank_ids)
        self.values = np.asarray(values, dtype=float)
        self.stderr = np.asarray(stderr, dtype=float)
        self.episodes_per_pair = episodes_per_pair

    @property
    def n(self) -> int:
        return len(self.bank_ids)

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("," + ",".join(self.bank_ids) + "\n")
        for i, row_id in enumerate(self.bank_ids):
            cells = ",".join(repr(float(v)) for v in self.values[i])
            out.write(f"{row_id},{cells}\n")
        return out.getvalue()

    def to_json(self) -> str:
        payload = {
            "bank_ids": self.bank_ids,
            "values": [[float(v) for v in row] for row in self.values],
            "stderr": [[float(v) for v in row] for row in self.stderr],
            "episodes_per_pair": self.episodes_per_pair,
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "PayoffMatrix":
        payload = json.loads(text)
        return cls(
            payload["bank_ids"],
            payload["values"],
            payload["stderr"],
            payload["episodes_per_pair"],
        )


def _pair_stats(spec, a, b, episodes, seed, runtime):
    """Mean and stderr of a's return against b, seats balanced."""
    returns = []
    for episode in range(episodes):
        match_seed = derive_seed(seed, "payoff", a.id, b.id, episode)
        try:
            if episode % 2 == 0:
                result = play_match(
                    spec, a, b, match_seed, runtime=runtime, lenient=True
                )
                returns.append(result.returns[0])
            else:
                result = play_match(
                    spec, b, a, match_seed, runtime=runtime, lenient=True
                )
                returns.append(result.returns[1])
        except MatchError as exc:
            raise PairMatchError(a.id, b.id, exc)
    mean = sum(returns) / len(returns)
    if len(returns) > 1:
        var = sum((r - mean) ** 2 for r in returns) / (len(returns) - 1)
        stderr = math.sqrt(var / len(returns))
    else:
        stderr = 0.0
    return mean, stderr


def compute_payoff_matrix(
    bank,
    spec,
    episodes_per_pair: int,
    seed: int,
    *,
    runtime=None,
    prev: PayoffMatrix | None = None,
) -> PayoffMatrix:
    """Estimate the meta-game matrix U over ``bank``.

    Entry (i, j) is the mean return of policy i against policy j over
    ``episodes_per_pair`` seeded matches with seats balanced across
    episodes. Per-pair match seeds are derived from the policy ids, so
    passing the previous matrix as ``prev`` when the bank has grown only
    reuses work; it never changes any value.
    """
    if not bank:
        raise ValueError("bank must be nonempty")
    if episodes_per_pair < 1:
        raise ValueError("episodes_per_pair must be >= 1")
    ids = [handle.id for handle in bank]
    if len(set(ids)) != len(ids):
        raise ValueError(f"bank ids must be unique, got {ids}")
    n = len(bank)
    values = np.zeros((n, n))
    stderr = np.zeros((n, n))

    start = {}
    if prev is not None and prev.bank_ids == ids[: prev.n]:
        m = prev.n
        values[:m, :m] = prev.values
        stderr[:m, :m] = prev.stderr
        start = {
            (i, j): True for i in range(m) for j in range(m)
        }

    for i in range(n):
        for j in range(i + 1, n):
            if (i, j) in start:
                continue
            mean, se = _pair_stats(
                spec, bank[i], bank[j], episodes_per_pair, seed, runtime
            )
            values[i, j] = mean
            values[j, i] = -mean
            stderr[i, j] = se
            stderr[j, i] = se

    values = (values - values.T) / 2.0
    np.fill_diagonal(values, 0.0)
    return PayoffMatrix(ids, values, stderr, episodes_per_pair)
