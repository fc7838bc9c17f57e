"""Symmetric zero-sum equilibrium solving for the empirical meta-game.

The solver is regret-matching+ self-play with linear strategy averaging,
run until the ``meta_nashconv`` certificate passes. A support-polish step
(solve the equilibrium equality system on the averaged strategy's support,
then re-check the certificate on the full matrix) usually snaps the answer
to machine precision long before the averaging alone would get there. The
certificate, not the method, guarantees correctness.
"""

from __future__ import annotations

import json

import numpy as np

from ..errors import SolverError

SUPPORT_TRUNCATION = 1e-9


class MetaStrategy:
    """A mixture over the policy bank."""

    def __init__(self, bank_ids, probs):
        self.bank_ids = list(bank_ids)
        self.probs = np.asarray(probs, dtype=float)
        if len(self.bank_ids) != self.probs.shape[0]:
            raise ValueError("bank_ids and probs disagree on size")
        if np.any(self.probs < 0):
            raise ValueError("probabilities must be nonnegative")
        if abs(self.probs.sum() - 1.0) > 1e-9:
            raise ValueError("probabilities must sum to one")

    @property
    def support(self) -> list[int]:
        return [i for i, p in enumerate(self.probs) if p > 0.0]

    def prob_of(self, bank_id: str) -> float:
        return float(self.probs[self.bank_ids.index(bank_id)])

    def to_json(self) -> str:
        payload = {
            "bank_ids": self.bank_ids,
            "probs": [float(p) for p in self.probs],
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "MetaStrategy":
        payload = json.loads(text)
        return cls(payload["bank_ids"], payload["probs"])


def _matrix_of(U) -> np.ndarray:
    values = U.values if hasattr(U, "values") else np.asarray(U, dtype=float)
    if values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise ValueError("payoff matrix must be square")
    return values


def _check_antisymmetric(values: np.ndarray) -> None:
    scale = max(1.0, float(np.max(np.abs(values))) if values.size else 1.0)
    if float(np.max(np.abs(values + values.T))) > 1e-9 * scale:
        raise ValueError("payoff matrix is not antisymmetric")


def meta_nashconv(sigma, U) -> float:
    """Best deviation payoff against the mixture, clamped at zero.

    Zero exactly when sigma is a symmetric equilibrium of the
    (antisymmetric) meta-game, whose value is zero.
    """
    values = _matrix_of(U)
    probs = sigma.probs if isinstance(sigma, MetaStrategy) else np.asarray(
        sigma, dtype=float
    )
    if probs.shape[0] != values.shape[0]:
        raise ValueError(
            f"dimension mismatch: sigma has {probs.shape[0]} entries, "
            f"matrix is {values.shape[0]}x{values.shape[1]}"
        )
    return max(0.0, float(np.max(values @ probs)))


def _truncate(probs: np.ndarray) -> np.ndarray:
    probs = np.where(probs < SUPPORT_TRUNCATION, 0.0, probs)
    return probs / probs.sum()


def _polish(values: np.ndarray, sigma: np.ndarray, epsilon: float):
    """Try to snap sigma onto an exact equilibrium via its support."""
    peak = float(sigma.max())
    if peak <= 0.0:
        return None
    for threshold in (1e-2, 1e-4, 1e-6):
        support = np.nonzero(sigma >= threshold * peak)[0]
        if support.size == 0:
            continue
        sub = values[np.ix_(support, support)]
        # Equilibrium with full support on S: payoffs of supported rows are
        # all zero (the game value) and probabilities sum to one.
        lhs = np.vstack([sub, np.ones((1, support.size))])
        rhs = np.zeros(support.size + 1)
        rhs[-1] = 1.0
        solution, *_ = np.linalg.lstsq(lhs, rhs, rcond=None)
        if solution.min() < -1e-9:
            continue
        candidate = np.zeros(values.shape[0])
        candidate[support] = np.clip(solution, 0.0, None)
        total = candidate.sum()
        if total <= 0.0:
            continue
        candidate /= total
        if meta_nashconv(candidate, values) <= epsilon:
            return candidate
    return None


def compute_meta_equilibrium(
    U,
    epsilon: float = 1e-6,
    max_iterations: int = 400_000,
    check_every: int = 250,
) -> MetaStrategy:
    """Solve for a symmetric equilibrium mixture of the meta-game.

    Deterministic given U. The returned mixture always satisfies
    ``meta_nashconv(sigma, U) <= epsilon``; probabilities below 1e-9 are
    truncated and the rest renormalized.
    """
    values = _matrix_of(U)
    _check_antisymmetric(values)
    bank_ids = (
        U.bank_ids
        if hasattr(U, "bank_ids")
        else [str(i) for i in range(values.shape[0])]
    )
    n = values.shape[0]
    if n == 1:
        return MetaStrategy(bank_ids, np.ones(1))

    regrets = [np.zeros(n), np.zeros(n)]
    current = [np.full(n, 1.0 / n), np.full(n, 1.0 / n)]
    averaged = np.zeros(n)

    def rm_plus(q):
        total = q.sum()
        if total <= 0.0:
            return np.full(n, 1.0 / n)
        return q / total

    t = 0
    while t < max_iterations:
        for _ in range(check_every):
            t += 1
            for player in (0, 1):
                # Both players face U: the opponent of the row player plays
                # columns of U, whose payoff matrix is -U^T = U.
                payoff = values @ current[1 - player]
                baseline = float(current[player] @ payoff)
                regrets[player] = np.maximum(
                    regrets[player] + payoff - baseline, 0.0
                )
                current[player] = rm_plus(regrets[player])
                averaged += t * current[player]
        sigma = averaged / averaged.sum()
        polished = _polish(values, sigma, epsilon)
        if polished is not None:
            return MetaStrategy(bank_ids, _truncate(polished))
        if meta_nashconv(sigma, values) <= epsilon:
            return MetaStrategy(bank_ids, _truncate(sigma))
    raise SolverError(
        f"no equilibrium certificate after {max_iterations} iterations "
        f"(epsilon={epsilon})"
    )
