"""Seed-driven match runner for both repeated games.

``play_match`` is the single simulation primitive: payoff estimation,
candidate scoring and population evaluation are all built on it. A match is
fully reproducible from (policies, seed): per-side policy seeds and the
dealing stream are derived functionally from the match seed.

In strict mode any policy failure aborts the match with a ``MatchError``
naming the offending side and round. In lenient mode (used while estimating
payoffs and scoring oracle candidates) the failed move is replaced with the
first legal action in the fixed order and counted in ``violations``.
"""

from __future__ import annotations

import random

from ..errors import MatchError, PolicyRuntimeError, PolicyStepError
from ..seeding import derive_seed
from . import leduc, rrps
from .base import (
    MatchResult,
    Policy,
    REPEATED_LEDUC,
    RepeatedGameSpec,
    RRPS,
    RRPS_MOVES,
)


def play_match(
    spec: RepeatedGameSpec,
    policy_a,
    policy_b,
    seed: int,
    *,
    runtime=None,
    lenient: bool = False,
) -> MatchResult:
    """Play one full match between two policies.

    ``policy_a`` / ``policy_b`` are either ``Policy`` instances or policy
    handles exposing ``instantiate(runtime)``. Handles are instantiated for
    this match only and released afterwards.
    """
    instances = []
    try:
        sides = []
        for side, p in enumerate((policy_a, policy_b)):
            inst = _materialize(p, runtime, side)
            instances.append(inst)
            sides.append(inst)
            try:
                inst.reset(derive_seed(seed, "policy", side))
            except PolicyRuntimeError as exc:
                raise MatchError(side, -1, f"reset failed: {exc}", exc)
        if spec.game_id == RRPS:
            result = _play_rrps(spec, sides, seed, lenient)
        else:
            result = _play_leduc(spec, sides, seed, lenient)
        result.transcript["policies"] = [
            _describe(policy_a),
            _describe(policy_b),
        ]
        result.transcript["stake_mode"] = spec.stake_mode
        return result
    finally:
        for inst in instances:
            inst.close()


def _describe(policy) -> dict:
    if hasattr(policy, "describe"):
        return policy.describe()
    return {"kind": "instance", "id": type(policy).__name__}


def _materialize(policy, runtime, side) -> Policy:
    if isinstance(policy, Policy):
        return policy
    if hasattr(policy, "instantiate"):
        try:
            return policy.instantiate(runtime)
        except PolicyRuntimeError as exc:
            raise MatchError(side, -1, f"could not start policy: {exc}", exc)
    raise TypeError(f"not a policy or policy handle: {policy!r}")


def _ask(policy, observation, legal, side, round_index, violations, lenient):
    try:
        action = policy.act(observation)
    except PolicyStepError as exc:
        if lenient:
            violations[side] += 1
            return legal[0]
        raise MatchError(side, round_index, f"policy failure: {exc}", exc)
    if not isinstance(action, str) or action not in legal:
        if lenient:
            violations[side] += 1
            return legal[0]
        raise MatchError(side, round_index, f"illegal action {action!r}")
    return action


def _notify(fn, side, round_index, violations, lenient, *args):
    try:
        fn(*args)
    except PolicyStepError as exc:
        if lenient:
            violations[side] += 1
            return
        raise MatchError(side, round_index, f"policy failure: {exc}", exc)


def _play_rrps(spec, policies, seed, lenient) -> MatchResult:
    score = 0
    prev_a = prev_b = None
    rounds = []
    violations = [0, 0]
    for rnd in range(spec.num_rounds):
        obs_a = rrps.observation(prev_a, prev_b)
        obs_b = rrps.observation(prev_b, prev_a)
        move_a = _ask(
            policies[0], obs_a, RRPS_MOVES, 0, rnd, violations, lenient
        )
        move_b = _ask(
            policies[1], obs_b, RRPS_MOVES, 1, rnd, violations, lenient
        )
        score += rrps.stage_payoff(move_a, move_b)
        rounds.append([move_a, move_b])
        prev_a, prev_b = move_a, move_b
    transcript = {
        "game": RRPS,
        "num_rounds": spec.num_rounds,
        "rounds": rounds,
    }
    return MatchResult(
        returns=(score, -score),
        transcript=transcript,
        seed=seed,
        violations=tuple(violations),
    )


def _play_leduc(spec, policies, seed, lenient) -> MatchResult:
    rng = random.Random(derive_seed(seed, "deal"))
    # Dealer of the first hand is drawn from the seed; the dealer role then
    # alternates every hand. The non-dealer acts first (position 0).
    first_dealer = rng.randrange(2)
    totals = [0, 0]
    violations = [0, 0]
    hands = []
    for hand_index in range(spec.num_rounds):
        dealer = (first_dealer + hand_index) % 2
        pos_to_side = (1 - dealer, dealer)  # position -> match player
        for position, side in enumerate(pos_to_side):
            _notify(
                policies[side].restart,
                side,
                hand_index,
                violations,
                lenient,
                position,
            )
        cards = rng.sample(list(spec.deck), 3)
        state = leduc.new_hand(
            (cards[0], cards[1]), cards[2], spec.stake_mode
        )
        actions = []
        while not state.terminal:
            position = state.current_player
            side = pos_to_side[position]
            obs = leduc.observation(state, position)
            legal = obs["player_view"]["legal_actions"]
            action = _ask(
                policies[side], obs, legal, side, hand_index, violations,
                lenient,
            )
            state = leduc.apply_action(state, action)
            actions.append([position, action])
        for position, side in enumerate(pos_to_side):
            _notify(
                policies[side].receive_outcome,
                side,
                hand_index,
                violations,
                lenient,
                leduc.outcome_observation(state, position),
            )
            totals[side] += state.returns[position]
        hands.append(
            {
                "first_actor": pos_to_side[0],
                "cards": cards,
                "actions": actions,
                "returns": list(state.returns),
                "outcome": state.outcome,
            }
        )
    transcript = {
        "game": REPEATED_LEDUC,
        "num_rounds": spec.num_rounds,
        "first_dealer": first_dealer,
        "hands": hands,
    }
    return MatchResult(
        returns=(totals[0], totals[1]),
        transcript=transcript,
        seed=seed,
        violations=tuple(violations),
    )
