"""CFR+ for the single-hand Leduc game.

The solver runs alternating updates with nonnegative-clamped cumulative
regrets and linearly weighted (iteration-t weight t) strategy averaging,
and returns the weighted average profile.

The betting tree is built once by driving the hand engine itself, so the
solver's game and the match engine's game are the same object by
construction. Private deals and the public reveal are enumerated over card
ranks with multiplicity weights.
"""

from __future__ import annotations

import json
from collections import Counter

from ..errors import MissingInfosetError
from ..games.base import ANTE, LEDUC_DEFAULT_DECK
from ..games.leduc import (
    POSTFLOP,
    apply_action,
    betting_string,
    hand_rank,
    legal_actions,
    new_hand,
)


def regret_matching_plus(cumulative_regret) -> list[float]:
    """Probabilities proportional to clamped regrets; uniform when all zero."""
    clamped = [max(0.0, float(r)) for r in cumulative_regret]
    total = sum(clamped)
    if total <= 0.0:
        return [1.0 / len(clamped)] * len(clamped)
    return [r / total for r in clamped]


def infoset_key(player, private, public, hist) -> str:
    return f"p{player}:{private}:{public or '-'}:{hist}"


class StrategyProfile:
    """Map from infoset key to a per-action probability distribution."""

    def __init__(self, table: dict[str, dict[str, float]]):
        self.table = table

    def __contains__(self, key: str) -> bool:
        return key in self.table

    def __len__(self) -> int:
        return len(self.table)

    def probs(self, key: str) -> dict[str, float]:
        try:
            return self.table[key]
        except KeyError:
            raise MissingInfosetError(key)

    def action_probs(self, key: str, actions) -> list[float]:
        dist = self.probs(key)
        return [dist.get(a, 0.0) for a in actions]

    def to_json(self) -> str:
        return json.dumps(self.table, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "StrategyProfile":
        return cls(json.loads(text))


# --- betting-tree skeleton -------------------------------------------------

class _Terminal:
    __slots__ = ("fold_returns", "stake")

    def __init__(self, fold_returns, stake):
        self.fold_returns = fold_returns  # None for showdowns
        self.stake = stake  # equal contribution at showdown, else None


class _Reveal:
    __slots__ = ("child",)

    def __init__(self, child):
        self.child = child


class _Decision:
    __slots__ = ("player", "actions", "children", "hist", "postflop",
                 "records")

    def __init__(self, player, actions, children, hist, postflop):
        self.player = player
        self.actions = actions
        self.children = children
        self.hist = hist
        self.postflop = postflop
        # (private, public or None) -> _InfosetRecord, filled by the solver
        self.records = {}


class _InfosetRecord:
    __slots__ = (
        "key", "actions", "regrets", "strategy_sum", "regret_delta",
        "average_delta", "dirty",
    )

    def __init__(self, key, actions):
        self.key = key
        self.actions = actions
        self.regrets = [0.0] * len(actions)
        self.strategy_sum = [0.0] * len(actions)
        # Deltas collected over all histories of the infoset within one
        # traversal and applied at its end, so every history sees the same
        # strategy during the pass.
        self.regret_delta = [0.0] * len(actions)
        self.average_delta = [0.0] * len(actions)
        self.dirty = False


def _build_skeleton(stake_mode: str) -> _Decision:
    # Cards are irrelevant to betting structure; any deal works here.
    def build(state):
        if state.terminal:
            if state.outcome == "FOLD":
                return _Terminal(state.returns, None)
            return _Terminal(None, state.contributions[0])
        actions = tuple(legal_actions(state))
        children = []
        for action in actions:
            child_state = apply_action(state, action)
            child = build(child_state)
            if not child_state.terminal and child_state.round != state.round:
                child = _Reveal(child)
            children.append(child)
        return _Decision(
            player=state.current_player,
            actions=actions,
            children=tuple(children),
            hist=betting_string(state),
            postflop=state.round == POSTFLOP,
        )

    return build(new_hand(("J", "Q"), "K", stake_mode))


def _deal_weights(deck):
    counts = Counter(deck)
    n = len(deck)
    pairs = []
    for c0 in sorted(counts):
        for c1 in sorted(counts):
            ways = counts[c0] * (counts[c1] - (1 if c0 == c1 else 0))
            if ways > 0:
                pairs.append((c0, c1, ways / (n * (n - 1))))
    return pairs


def _public_weights(deck):
    counts = Counter(deck)
    n = len(deck)
    table = {}
    for c0, c1, _ in _deal_weights(deck):
        remaining = dict(counts)
        remaining[c0] -= 1
        remaining[c1] -= 1
        table[(c0, c1)] = tuple(
            (card, cnt / (n - 2))
            for card, cnt in sorted(remaining.items())
            if cnt > 0
        )
    return table


class CfrPlusSolver:
    """Incremental CFR+ runner; ``run`` may be called repeatedly."""

    def __init__(self, stake_mode: str = ANTE, deck=LEDUC_DEFAULT_DECK):
        self.stake_mode = stake_mode
        self.deck = tuple(deck)
        self.root = _build_skeleton(stake_mode)
        self.deal_pairs = _deal_weights(self.deck)
        self.public_weights = _public_weights(self.deck)
        self.iterations_done = 0
        self._records: list[_InfosetRecord] = []
        self._dirty: list[_InfosetRecord] = []
        self._index_infosets()

    def _index_infosets(self):
        ranks = sorted(set(self.deck))

        def visit(node, publics):
            if isinstance(node, _Terminal):
                return
            if isinstance(node, _Reveal):
                visit(node.child, publics)
                return
            for private in ranks:
                if node.postflop:
                    cards = [(private, pub) for pub in publics]
                else:
                    cards = [(private, None)]
                for private_card, pub in cards:
                    if (private_card, pub) not in node.records:
                        record = _InfosetRecord(
                            infoset_key(
                                node.player, private_card, pub, node.hist
                            ),
                            node.actions,
                        )
                        node.records[(private_card, pub)] = record
                        self._records.append(record)
            for child in node.children:
                visit(child, publics)

        visit(self.root, ranks)

    def run(self, iterations: int) -> None:
        for _ in range(iterations):
            self.iterations_done += 1
            t = float(self.iterations_done)
            for traverser in (0, 1):
                dirty = self._dirty
                for c0, c1, w in self.deal_pairs:
                    self._walk(self.root, c0, c1, None, 1.0, w, traverser, t)
                for record in dirty:
                    regrets = record.regrets
                    deltas = record.regret_delta
                    sums = record.strategy_sum
                    avg = record.average_delta
                    for i in range(len(regrets)):
                        updated = regrets[i] + deltas[i]
                        regrets[i] = updated if updated > 0.0 else 0.0
                        deltas[i] = 0.0
                        sums[i] += avg[i]
                        avg[i] = 0.0
                    record.dirty = False
                dirty.clear()

    def _walk(self, node, c0, c1, pub, reach_me, reach_opp, traverser, t):
        if isinstance(node, _Terminal):
            if node.fold_returns is not None:
                return float(node.fold_returns[traverser])
            r0 = hand_rank(c0, pub)
            r1 = hand_rank(c1, pub)
            if r0 == r1:
                return 0.0
            winner = 0 if r0 > r1 else 1
            return float(node.stake if winner == traverser else -node.stake)
        if isinstance(node, _Reveal):
            value = 0.0
            for public, p in self.public_weights[(c0, c1)]:
                value += p * self._walk(
                    node.child, c0, c1, public, reach_me, reach_opp * p,
                    traverser, t,
                )
            return value

        private = c0 if node.player == 0 else c1
        record = node.records[(private, pub if node.postflop else None)]
        strat = regret_matching_plus(record.regrets)
        children = node.children
        if node.player != traverser:
            # No pruning of zero-probability branches: the traverser's
            # average strategy must keep accumulating below them (it is
            # weighted by the traverser's own reach, not the opponent's).
            value = 0.0
            for i, child in enumerate(children):
                p = strat[i]
                value += p * self._walk(
                    child, c0, c1, pub, reach_me, reach_opp * p,
                    traverser, t,
                )
            return value

        child_values = [
            self._walk(
                child, c0, c1, pub, reach_me * strat[i], reach_opp,
                traverser, t,
            )
            for i, child in enumerate(children)
        ]
        value = sum(p * v for p, v in zip(strat, child_values))
        deltas = record.regret_delta
        avg = record.average_delta
        for i, v in enumerate(child_values):
            deltas[i] += reach_opp * (v - value)
            avg[i] += t * reach_me * strat[i]
        if not record.dirty:
            record.dirty = True
            self._dirty.append(record)
        return value

    def average_profile(self) -> StrategyProfile:
        """Weighted average strategy; uniform at never-visited infosets."""
        table = {}
        for record in self._records:
            total = sum(record.strategy_sum)
            if total > 0.0:
                dist = {
                    a: s / total
                    for a, s in zip(record.actions, record.strategy_sum)
                }
            else:
                dist = {
                    a: 1.0 / len(record.actions) for a in record.actions
                }
            table[record.key] = dist
        return StrategyProfile(table)

    def infoset_actions(self) -> dict[str, tuple[str, ...]]:
        return {r.key: r.actions for r in self._records}


def cfr_plus_solve(
    iterations: int,
    stake_mode: str = ANTE,
    deck=LEDUC_DEFAULT_DECK,
) -> StrategyProfile:
    if iterations < 0:
        raise ValueError("iterations must be >= 0")
    solver = CfrPlusSolver(stake_mode, deck)
    solver.run(iterations)
    return solver.average_profile()
