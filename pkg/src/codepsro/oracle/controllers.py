"""The three response-oracle controllers.

Each controller turns backend completions into evaluated policy handles:

* ``zero_shot``: one generation, returned unevaluated.
* ``linear_refinement``: evaluate, then regenerate with feedback until the
  utility is nonnegative or the refinement budget is spent; the incumbent
  is replaced only on a strict score increase.
* ``evolutionary_refinement``: island populations, parents sampled in
  favor of high scores, mutations requested as SEARCH/REPLACE patch sets
  (full rewrites with a configured probability), worst-member eviction and
  periodic elite migration.

Whatever the path, the returned candidate's evaluated score is the
maximum over every candidate evaluated in the invocation.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from ..errors import (
    MalformedGenerationError,
    OracleFailure,
    PatchApplyError,
    PatchParseError,
    PolicyLoadError,
)
from ..runtime.handles import PolicyHandle, spawn_code_policy
from ..seeding import derive_seed
from .config import EVOLUTIONARY, LINEAR_REFINEMENT, OracleConfig, ZERO_SHOT
from .context import build_opponent_context
from .extract import extract_program
from .patching import apply_patchset, parse_patchset
from .prompts import construct_prompt


def terminated(u: float, j: int, M: int) -> bool:
    """Refinement stops at nonnegative utility or an exhausted budget."""
    return u >= 0 or j >= M


@dataclass
class OracleResult:
    handle: PolicyHandle
    evaluation: object  # PolicyEvaluation
    n_evaluations: int
    log: list = field(default_factory=list)
    prompt: str = ""
    completion: str = ""


class _Generator:
    """Shared generate/extract/spawn step with a malformed-retry budget."""

    def __init__(self, backend, config, game_id, runtime, id_prefix, log):
        self.backend = backend
        self.config = config
        self.game_id = game_id
        self.runtime = runtime
        self.id_prefix = id_prefix
        self.log = log if log is not None else []
        self.counter = 0
        self.artifacts: dict[str, tuple[str, str]] = {}

    def _next_id(self) -> str:
        handle_id = f"{self.id_prefix}_c{self.counter}"
        self.counter += 1
        return handle_id

    def generate(self, prompt: str, parent_source: str | None = None,
                 mutation: bool = False) -> PolicyHandle:
        """One candidate, retrying malformed completions.

        With ``mutation`` the completion is parsed as a patch set applied
        to ``parent_source``; otherwise the program is extracted directly.
        """
        attempts = 1 + self.config.retry_budget
        last_error = None
        for attempt in range(attempts):
            completion = self.backend.complete(prompt)
            entry = {
                "phase": "mutation" if mutation else "generation",
                "attempt": attempt,
                "prompt": prompt,
                "completion": completion,
            }
            try:
                if mutation:
                    patchset = parse_patchset(completion)
                    source = apply_patchset(parent_source, patchset)
                else:
                    source = extract_program(completion)
                handle = spawn_code_policy(
                    source,
                    self.game_id,
                    self.runtime,
                    handle_id=self._next_id(),
                )
            except (
                MalformedGenerationError,
                PatchParseError,
                PatchApplyError,
                PolicyLoadError,
            ) as exc:
                last_error = exc
                entry["error"] = repr(exc)
                self.log.append(entry)
                continue
            self.log.append(entry)
            self.artifacts[handle.id] = (prompt, completion)
            return handle
        raise OracleFailure(
            f"no usable program after {attempts} attempts: {last_error!r}"
        )


def zero_shot(
    game_spec,
    sigma,
    bank,
    config: OracleConfig,
    backend,
    *,
    runtime=None,
    opponents=None,
    id_prefix: str = "candidate",
    log=None,
) -> PolicyHandle:
    """One prompt, one generation; the candidate is returned unevaluated."""
    if opponents is None:
        opponents = build_opponent_context(sigma, bank, config, backend)
    prompt = construct_prompt(game_spec, config=config, opponents=opponents)
    generator = _Generator(
        backend, config, game_spec.game_id, runtime, id_prefix, log
    )
    return generator.generate(prompt)


def linear_refinement(
    game_spec,
    sigma,
    bank,
    config: OracleConfig,
    backend,
    evaluator,
    *,
    runtime=None,
    opponents=None,
    id_prefix: str = "candidate",
    log=None,
) -> OracleResult:
    """Single-thread refinement driven by the evaluated utility."""
    if opponents is None:
        opponents = build_opponent_context(sigma, bank, config, backend)
    generator = _Generator(
        backend, config, game_spec.game_id, runtime, id_prefix, log
    )
    base_prompt = construct_prompt(
        game_spec, config=config, opponents=opponents
    )
    incumbent = generator.generate(base_prompt)
    incumbent_eval = evaluator(incumbent)
    evaluations = 1
    best = (incumbent, incumbent_eval)

    j = 0
    budget = config.refinement_budget
    while not terminated(incumbent_eval.score, j, budget):
        j += 1
        prompt = construct_prompt(
            game_spec,
            config=config,
            opponents=opponents,
            current_program=incumbent.source,
            feedback=incumbent_eval,
        )
        try:
            challenger = generator.generate(prompt)
        except OracleFailure:
            continue  # a wasted refinement step, not a fatal one
        challenger_eval = evaluator(challenger)
        evaluations += 1
        # The program is updated only if the score strictly increased.
        if challenger_eval.score > incumbent_eval.score:
            incumbent, incumbent_eval = challenger, challenger_eval
        if challenger_eval.score > best[1].score:
            best = (challenger, challenger_eval)

    if not best[1].valid:
        raise OracleFailure("every generated candidate was rejected")
    prompt, completion = generator.artifacts[best[0].id]
    return OracleResult(
        handle=best[0],
        evaluation=best[1],
        n_evaluations=evaluations,
        log=generator.log,
        prompt=prompt,
        completion=completion,
    )


@dataclass
class _Member:
    handle: PolicyHandle
    evaluation: object
    order: int  # insertion order, breaks eviction ties deterministically


def _sample_parent(members, temperature_scale, rng):
    scores = [
        m.evaluation.score for m in members if m.evaluation.valid
    ]
    candidates = [m for m in members if m.evaluation.valid]
    if not candidates:
        candidates = list(members)
        scores = [0.0 for _ in candidates]
    if len(candidates) == 1:
        return candidates[0]
    spread = _std(scores)
    temperature = temperature_scale * spread if spread > 0 else 1.0
    top = max(scores)
    weights = [math.exp((s - top) / temperature) for s in scores]
    total = sum(weights)
    draw = rng.random() * total
    acc = 0.0
    for member, weight in zip(candidates, weights):
        acc += weight
        if draw < acc:
            return member
    return candidates[-1]


def _std(values):
    if len(values) < 2:
        return 0.0
    mean = sum(values) / len(values)
    return math.sqrt(sum((v - mean) ** 2 for v in values) / len(values))


def evolutionary_refinement(
    game_spec,
    sigma,
    bank,
    config: OracleConfig,
    backend,
    evaluator,
    *,
    runtime=None,
    opponents=None,
    seed: int = 0,
    island_seeds=None,
    id_prefix: str = "candidate",
    log=None,
) -> OracleResult:
    """Island-model evolutionary search over programs.

    Each island evolves independently on its own random stream; every
    ``migration_period`` generations the best member of each island is
    copied to the next island. Backend and patch failures consume the
    per-step retry budget but never abort the run. Stops when
    ``eval_budget`` candidate evaluations have been spent and returns the
    best-scoring candidate ever evaluated.
    """
    if opponents is None:
        opponents = build_opponent_context(sigma, bank, config, backend)
    params = config.evolution
    generator = _Generator(
        backend, config, game_spec.game_id, runtime, id_prefix, log
    )
    base_prompt = construct_prompt(
        game_spec, config=config, opponents=opponents
    )
    if island_seeds is None:
        island_seeds = [
            derive_seed(seed, "island", i) for i in range(params.islands)
        ]
    rngs = [random.Random(s) for s in island_seeds]

    islands: list[list[_Member]] = [[] for _ in range(params.islands)]
    best: _Member | None = None
    evaluations = 0
    order = 0

    def insert(island_index: int, member: _Member):
        nonlocal best
        island = islands[island_index]
        island.append(member)
        if len(island) > params.island_capacity:
            worst = min(
                island,
                key=lambda m: (
                    m.evaluation.score
                    if m.evaluation.valid
                    else float("-inf"),
                    -m.order,
                ),
            )
            island.remove(worst)
        if member.evaluation.valid and (
            best is None or member.evaluation.score > best.evaluation.score
        ):
            best = member

    # Seed every island with an independent zero-shot candidate.
    for i in range(params.islands):
        if evaluations >= params.eval_budget:
            break
        try:
            handle = generator.generate(base_prompt)
        except OracleFailure:
            continue
        evaluation = evaluator(handle)
        evaluations += 1
        insert(i, _Member(handle, evaluation, order))
        order += 1

    generation = 0
    stalled = 0
    while evaluations < params.eval_budget:
        generation += 1
        progressed = False
        for i in range(params.islands):
            if evaluations >= params.eval_budget:
                break
            if not islands[i]:
                continue
            rng = rngs[i]
            parent = _sample_parent(islands[i], params.temperature_scale, rng)
            mutation = rng.random() >= params.rewrite_prob
            prompt = construct_prompt(
                game_spec,
                config=config,
                opponents=opponents,
                current_program=parent.handle.source,
                feedback=parent.evaluation,
                mutation=mutation,
            )
            try:
                child = generator.generate(
                    prompt,
                    parent_source=parent.handle.source,
                    mutation=mutation,
                )
            except OracleFailure:
                continue
            evaluation = evaluator(child)
            evaluations += 1
            progressed = True
            insert(i, _Member(child, evaluation, order))
            order += 1
        if (
            params.islands > 1
            and generation % params.migration_period == 0
        ):
            elites = []
            for island in islands:
                valid = [m for m in island if m.evaluation.valid]
                elites.append(
                    max(valid, key=lambda m: m.evaluation.score)
                    if valid
                    else None
                )
            for i, elite in enumerate(elites):
                if elite is None:
                    continue
                target = (i + 1) % params.islands
                insert(
                    target, _Member(elite.handle, elite.evaluation, order)
                )
                order += 1
        if not progressed:
            stalled += 1
            if stalled >= 3:
                break  # every island kept failing; budget cannot be spent
        else:
            stalled = 0

    if best is None:
        raise OracleFailure("evolutionary search produced no valid candidate")
    prompt, completion = generator.artifacts[best.handle.id]
    return OracleResult(
        handle=best.handle,
        evaluation=best.evaluation,
        n_evaluations=evaluations,
        log=generator.log,
        prompt=prompt,
        completion=completion,
    )


def run_oracle(
    variant: str,
    game_spec,
    sigma,
    bank,
    config: OracleConfig,
    backend,
    evaluator,
    **kwargs,
) -> OracleResult:
    """Dispatch by variant; zero-shot candidates are evaluated once here."""
    if variant != EVOLUTIONARY:
        kwargs.pop("seed", None)
        kwargs.pop("island_seeds", None)
    if variant == ZERO_SHOT:
        log: list = kwargs.pop("log", None)
        if log is None:
            log = []
        handle = zero_shot(
            game_spec, sigma, bank, config, backend, log=log, **kwargs
        )
        evaluation = evaluator(handle)
        if not evaluation.valid:
            raise OracleFailure("zero-shot candidate was rejected")
        accepted = [entry for entry in log if "error" not in entry]
        prompt = accepted[-1]["prompt"] if accepted else ""
        completion = accepted[-1]["completion"] if accepted else ""
        return OracleResult(
            handle=handle,
            evaluation=evaluation,
            n_evaluations=1,
            log=log,
            prompt=prompt,
            completion=completion,
        )
    if variant == LINEAR_REFINEMENT:
        return linear_refinement(
            game_spec, sigma, bank, config, backend, evaluator, **kwargs
        )
    if variant == EVOLUTIONARY:
        return evolutionary_refinement(
            game_spec, sigma, bank, config, backend, evaluator, **kwargs
        )
    raise ValueError(f"unknown oracle variant {variant!r}")
