"""Exact best response and exploitability for single-hand Leduc.

The best responder maximizes, at each of its information sets, the sum of
continuation values weighted by the opponent-and-chance reach of the
histories in the set; the computation is an exact expectimax over the full
tree, no sampling anywhere.
"""

from __future__ import annotations

from ..games.base import ANTE, LEDUC_DEFAULT_DECK
from ..games.leduc import hand_rank
from .solver import (
    StrategyProfile,
    _Reveal,
    _Terminal,
    _build_skeleton,
    _deal_weights,
    _public_weights,
    infoset_key,
)


class _BestResponse:
    def __init__(self, profile, br_player, stake_mode, deck):
        self.profile = profile
        self.br_player = br_player
        self.root = _build_skeleton(stake_mode)
        self.deal_pairs = _deal_weights(tuple(deck))
        self.public_weights = _public_weights(tuple(deck))
        self._node_ids = {}
        self._infosets = {}  # key -> list of (node, c0, c1, pub, reach)
        self._values = {}
        self._decisions = {}
        for c0, c1, w in self.deal_pairs:
            self._collect(self.root, c0, c1, None, w)

    def _node_id(self, node):
        ident = self._node_ids.get(id(node))
        if ident is None:
            ident = len(self._node_ids)
            self._node_ids[id(node)] = ident
        return ident

    def _key(self, node, c0, c1, pub):
        private = c0 if node.player == 0 else c1
        return infoset_key(
            node.player, private, pub if node.postflop else None, node.hist
        )

    def _collect(self, node, c0, c1, pub, reach):
        if isinstance(node, _Terminal):
            return
        if isinstance(node, _Reveal):
            for public, p in self.public_weights[(c0, c1)]:
                self._collect(node.child, c0, c1, public, reach * p)
            return
        if node.player == self.br_player:
            self._infosets.setdefault(self._key(node, c0, c1, pub), []).append(
                (node, c0, c1, pub, reach)
            )
            for child in node.children:
                self._collect(child, c0, c1, pub, reach)
        else:
            probs = self.profile.action_probs(
                self._key(node, c0, c1, pub), node.actions
            )
            for p, child in zip(probs, node.children):
                self._collect(child, c0, c1, pub, reach * p)

    def _decision(self, key):
        choice = self._decisions.get(key)
        if choice is None:
            members = self._infosets[key]
            n_actions = len(members[0][0].actions)
            best_value = None
            choice = 0
            for a in range(n_actions):
                total = 0.0
                for node, c0, c1, pub, reach in members:
                    total += reach * self._value(node.children[a], c0, c1, pub)
                if best_value is None or total > best_value:
                    best_value = total
                    choice = a
            self._decisions[key] = choice
        return choice

    def _value(self, node, c0, c1, pub):
        memo_key = (self._node_id(node), c0, c1, pub)
        cached = self._values.get(memo_key)
        if cached is not None:
            return cached
        value = self._compute_value(node, c0, c1, pub)
        self._values[memo_key] = value
        return value

    def _compute_value(self, node, c0, c1, pub):
        if isinstance(node, _Terminal):
            if node.fold_returns is not None:
                return float(node.fold_returns[self.br_player])
            r0 = hand_rank(c0, pub)
            r1 = hand_rank(c1, pub)
            if r0 == r1:
                return 0.0
            winner = 0 if r0 > r1 else 1
            stake = float(node.stake)
            return stake if winner == self.br_player else -stake
        if isinstance(node, _Reveal):
            return sum(
                p * self._value(node.child, c0, c1, public)
                for public, p in self.public_weights[(c0, c1)]
            )
        key = self._key(node, c0, c1, pub)
        if node.player == self.br_player:
            return self._value(node.children[self._decision(key)], c0, c1, pub)
        probs = self.profile.action_probs(key, node.actions)
        return sum(
            p * self._value(child, c0, c1, pub)
            for p, child in zip(probs, node.children)
            if p > 0.0
        )

    def value(self) -> float:
        return sum(
            w * self._value(self.root, c0, c1, None)
            for c0, c1, w in self.deal_pairs
        )


def best_response_value(
    profile: StrategyProfile,
    br_player: int,
    stake_mode: str = ANTE,
    deck=LEDUC_DEFAULT_DECK,
) -> float:
    """Expected chips per hand of an exact best responder in seat
    ``br_player`` against ``profile`` playing the other seat."""
    return _BestResponse(profile, br_player, stake_mode, deck).value()


def exploitability(
    profile: StrategyProfile,
    stake_mode: str = ANTE,
    deck=LEDUC_DEFAULT_DECK,
) -> float:
    """Half the sum of both seats' best-response values (NashConv / 2).

    Zero exactly when the profile is a Nash equilibrium; the seat-dependent
    game value cancels in the sum because the game is zero-sum.
    """
    total = sum(
        best_response_value(profile, p, stake_mode, deck) for p in (0, 1)
    )
    return max(0.0, total / 2.0)


def profile_from_rule(
    rule,
    stake_mode: str = ANTE,
    deck=LEDUC_DEFAULT_DECK,
) -> StrategyProfile:
    """Materialize a behavioral rule into a full strategy profile.

    ``rule(player, private, public, hist, actions)`` returns either an
    action name (pure strategy) or an action -> probability dict. Useful
    for turning scripted opponents into exact-solver inputs.
    """
    from .solver import CfrPlusSolver

    solver = CfrPlusSolver(stake_mode, deck)
    table = {}
    for key, actions in solver.infoset_actions().items():
        head, private, public, hist = key.split(":", 3)
        player = int(head[1:])
        public_card = None if public == "-" else public
        choice = rule(player, private, public_card, hist, actions)
        if isinstance(choice, str):
            dist = {a: (1.0 if a == choice else 0.0) for a in actions}
        else:
            dist = {a: float(choice.get(a, 0.0)) for a in actions}
        total = sum(dist.values())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"rule returned a non-distribution at {key}")
        table[key] = dist
    return StrategyProfile(table)
