"""The end-to-end response-oracle loop with run-directory persistence.

One iteration: estimate the payoff matrix over the bank (incrementally),
solve the meta-equilibrium, ask the oracle for a best-response policy,
append it to the bank. Every artifact is persisted per iteration under the
run directory; an interrupted run resumes from the last completed
iteration and, with a fixture-backed backend, reproduces an uninterrupted
run bit for bit. All seeds derive functionally from the master seed, so
nothing depends on wall clock, process ids or scheduling.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import yaml

from .cfr.solver import StrategyProfile
from .cfr.table_policy import as_policy
from .data import leduc_heuristic_bot_source
from .errors import CodePsroError, OracleFailure
from .games.base import REPEATED_LEDUC, RepeatedGameSpec, RRPS
from .metagame.evaluate import evaluate_policy
from .metagame.payoff import PayoffMatrix, compute_payoff_matrix
from .metagame.solver import (
    MetaStrategy,
    compute_meta_equilibrium,
    meta_nashconv,
)
from .metrics import agg_score
from .oracle.backends import HttpBackend, MockBackend
from .oracle.config import EvolutionParams, OracleConfig
from .oracle.context import SummaryCache, build_opponent_context
from .oracle.controllers import run_oracle
from .populations import named_policy_registry, population_handles
from .runtime.handles import CODE, NATIVE, PolicyHandle, RuntimeConfig
from .seeding import derive_seed

DEFAULT_EPISODES_PER_PAIR = {RRPS: 20, REPEATED_LEDUC: 50}


@dataclass(frozen=True)
class BackendConfig:
    type: str = "mock"  # mock | http
    fixture_dir: str | None = None
    endpoint: str | None = None
    model: str | None = None
    api_key_env: str = "LLM_API_KEY"
    timeout: float = 120.0
    max_retries: int = 2

    def build(self):
        if self.type == "mock":
            if not self.fixture_dir:
                raise ValueError("mock backend needs fixture_dir")
            return MockBackend(self.fixture_dir)
        if self.type == "http":
            if not (self.endpoint and self.model):
                raise ValueError("http backend needs endpoint and model")
            return HttpBackend(
                self.endpoint,
                self.model,
                api_key_env=self.api_key_env,
                timeout=self.timeout,
                max_retries=self.max_retries,
            )
        raise ValueError(f"unknown backend type {self.type!r}")


@dataclass(frozen=True)
class RunConfig:
    game: str = RRPS
    num_rounds: int = 0  # 0 -> per-game default
    stake_mode: str = "ante"
    iterations: int = 5
    seed: int = 0
    episodes_per_pair: int = 0  # 0 -> per-game default
    eval_episodes: int = 8
    epsilon: float = 1e-6
    eval_population: str | None = None  # rrps | leduc_heuristics | leduc_full
    eval_population_episodes: int = 4
    cfr_profile: str | None = None  # needed for leduc_full
    initial_policy: str | None = None  # registry name; None -> game default
    oracle: OracleConfig = field(default_factory=OracleConfig)
    backend: BackendConfig = field(default_factory=BackendConfig)
    runtime: RuntimeConfig = field(default_factory=RuntimeConfig)
    out_dir: str = "run"

    @property
    def game_spec(self) -> RepeatedGameSpec:
        return RepeatedGameSpec(
            game_id=self.game,
            num_rounds=self.num_rounds,
            stake_mode=self.stake_mode,
        )

    @property
    def pair_episodes(self) -> int:
        return self.episodes_per_pair or DEFAULT_EPISODES_PER_PAIR[self.game]

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        data = dict(data)
        oracle = data.pop("oracle", {}) or {}
        evolution = oracle.pop("evolution", {}) or {}
        backend = data.pop("backend", {}) or {}
        backend.update(data.pop("llm", {}) or {})  # accepted alias
        runtime = data.pop("runtime", {}) or {}
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        try:
            return cls(
                oracle=OracleConfig(
                    evolution=EvolutionParams(**evolution), **oracle
                ),
                backend=BackendConfig(**backend),
                runtime=RuntimeConfig(**runtime),
                **data,
            )
        except TypeError as exc:
            raise ValueError(f"bad config: {exc}") from exc

    def to_dict(self) -> dict:
        def plain(obj):
            return {
                f.name: getattr(obj, f.name) for f in fields(obj)
            }

        data = plain(self)
        oracle = plain(self.oracle)
        oracle["evolution"] = plain(self.oracle.evolution)
        data["oracle"] = oracle
        data["backend"] = plain(self.backend)
        data["runtime"] = plain(self.runtime)
        return data

    @classmethod
    def from_yaml(cls, path, overrides=None) -> "RunConfig":
        data = yaml.safe_load(Path(path).read_text()) or {}
        for dotted, value in (overrides or {}).items():
            _set_dotted(data, dotted, value)
        return cls.from_dict(data)

    def to_yaml(self) -> str:
        """Config echo for the run directory; paths relativized so that
        identical runs in different directories stay byte-identical."""
        data = self.to_dict()
        data["out_dir"] = "."
        return yaml.safe_dump(data, sort_keys=True, default_flow_style=False)


def _set_dotted(data: dict, dotted: str, value):
    keys = dotted.split(".")
    node = data
    for key in keys[:-1]:
        node = node.setdefault(key, {})
        if not isinstance(node, dict):
            raise ValueError(f"cannot override through scalar at {key!r}")
    node[keys[-1]] = yaml.safe_load(value) if isinstance(value, str) else value


@dataclass
class IterationRecord:
    iteration: int
    policy: PolicyHandle
    nashconv: float
    score: float | None
    per_opponent: dict
    n_evaluations: int
    population_metrics: dict | None = None


@dataclass
class RunState:
    config: RunConfig
    bank: list[PolicyHandle]
    payoffs: list[PayoffMatrix] = field(default_factory=list)
    sigmas: list[MetaStrategy] = field(default_factory=list)
    records: list[IterationRecord] = field(default_factory=list)
    final_payoff: PayoffMatrix | None = None
    final_sigma: MetaStrategy | None = None

    @property
    def out_dir(self) -> Path:
        return Path(self.config.out_dir)


def initial_policy(
    game_spec: RepeatedGameSpec, runtime: RuntimeConfig | None = None
) -> PolicyHandle:
    """The seed policy: uniform random for RRPS, the shipped card-strength
    heuristic for Leduc (run through the policy host when one is
    configured, native port otherwise)."""
    registry = named_policy_registry()
    if game_spec.game_id == RRPS:
        return registry["init/rrps_uniform"]
    if runtime is not None and runtime.policy_host_cmd:
        return PolicyHandle.from_source(
            "init/leduc_heuristic",
            REPEATED_LEDUC,
            leduc_heuristic_bot_source(),
            description="card-strength starter policy",
        )
    return registry["init/leduc_heuristic"]


def resolve_population(
    name: str, cfr_profile: str | None = None
) -> list[PolicyHandle]:
    if name == "rrps":
        return population_handles(RRPS)
    if name == "leduc_heuristics":
        return population_handles(REPEATED_LEDUC)
    if name == "leduc_full":
        if not cfr_profile:
            raise ValueError(
                "leduc_full population needs cfr_profile (see solve-leduc)"
            )
        profile = StrategyProfile.from_json(Path(cfr_profile).read_text())
        return population_handles(REPEATED_LEDUC) + [as_policy(profile)]
    raise ValueError(f"unknown population {name!r}")


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _iteration_dir(out_dir: Path, k: int) -> Path:
    return out_dir / f"iter_{k:03d}"


def _iteration_complete(iter_dir: Path, needs_population: bool) -> bool:
    required = ["payoff.json", "sigma.json", "policy.src", "scores.json"]
    if needs_population:
        required.append("population.json")
    return all((iter_dir / name).exists() for name in required)


def _restore_handle(iter_dir: Path, game_id: str) -> PolicyHandle:
    import json

    scores = json.loads((iter_dir / "scores.json").read_text())
    policy_id = scores["policy_id"]
    kind = scores["kind"]
    if kind == CODE:
        return PolicyHandle.from_source(
            policy_id, game_id, (iter_dir / "policy.src").read_text()
        )
    if kind == NATIVE:
        registry_name = scores.get("registry_name")
        base = named_policy_registry().get(registry_name)
        if base is None:
            raise CodePsroError(
                f"cannot resume: unknown registry policy {registry_name!r}"
            )
        return replace(
            base,
            id=policy_id,
            metadata={**base.metadata, "registry_name": registry_name},
        )
    raise CodePsroError(f"cannot resume a policy of kind {kind!r}")


class _PopulationScorer:
    """Sigma-mixture metrics against the evaluation population.

    Per-(bank member, opponent) means are deterministic in the seeds and
    cached, so per-iteration metrics cost one new bank row of matches.
    """

    def __init__(self, population, spec, episodes, seed, runtime):
        self.population = population
        self.spec = spec
        self.episodes = episodes
        self.seed = seed
        self.runtime = runtime
        self._means: dict[tuple[str, str], float] = {}

    def _mean(self, member: PolicyHandle, opponent: PolicyHandle) -> float:
        from .games.match import play_match

        key = (member.id, opponent.id)
        if key not in self._means:
            total = 0.0
            for episode in range(self.episodes):
                match_seed = derive_seed(
                    self.seed, "popmix", member.id, opponent.id, episode
                )
                if episode % 2 == 0:
                    result = play_match(
                        self.spec, member, opponent, match_seed,
                        runtime=self.runtime, lenient=True,
                    )
                    total += result.returns[0]
                else:
                    result = play_match(
                        self.spec, opponent, member, match_seed,
                        runtime=self.runtime, lenient=True,
                    )
                    total += result.returns[1]
            self._means[key] = total / self.episodes
        return self._means[key]

    def metrics(self, sigma: MetaStrategy, bank) -> dict:
        by_id = {handle.id: handle for handle in bank}
        mixture_means = []
        for opponent in self.population:
            value = 0.0
            for bank_id, prob in zip(sigma.bank_ids, sigma.probs):
                if prob > 0.0:
                    value += prob * self._mean(by_id[bank_id], opponent)
            mixture_means.append(value)
        pop_return = sum(mixture_means) / len(mixture_means)
        pop_expl = -min(mixture_means)
        return {
            "pop_return": pop_return,
            "pop_expl": pop_expl,
            "agg_score": agg_score(pop_return, pop_expl),
        }


def run(
    config: RunConfig, oracle=None, backend=None, seed_policy=None
) -> RunState:
    """Run the full loop (or resume it) and return the final state.

    ``oracle`` may override the configured backend-driven oracle with any
    object exposing ``propose(game_spec, sigma, bank, evaluator, ...)`` --
    used by fixed-point tests and custom search strategies. ``backend``
    overrides the configured generation backend and ``seed_policy`` the
    bank's starting member.
    """
    import json

    spec = config.game_spec
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    config_text = config.to_yaml()
    config_path = out_dir / "config.yaml"
    if config_path.exists():
        if config_path.read_text() != config_text:
            raise CodePsroError(
                "run directory already holds a different config; "
                "refusing to mix runs"
            )
    else:
        _write(config_path, config_text)

    summary_cache = None
    if oracle is None:
        if backend is None:
            backend = config.backend.build()
        summary_cache = SummaryCache(out_dir / "summaries.json")

    population = None
    scorer = None
    if config.eval_population:
        population = resolve_population(
            config.eval_population, config.cfr_profile
        )
        scorer = _PopulationScorer(
            population,
            spec,
            config.eval_population_episodes,
            config.seed,
            config.runtime,
        )

    if seed_policy is None:
        if config.initial_policy:
            seed_policy = named_policy_registry().get(config.initial_policy)
            if seed_policy is None:
                raise CodePsroError(
                    f"unknown initial_policy {config.initial_policy!r}"
                )
        else:
            seed_policy = initial_policy(spec, config.runtime)
    state = RunState(config=config, bank=[seed_policy])
    prev_payoff = None

    for k in range(1, config.iterations + 1):
        iter_dir = _iteration_dir(out_dir, k)
        if _iteration_complete(iter_dir, scorer is not None):
            payoff = PayoffMatrix.from_json(
                (iter_dir / "payoff.json").read_text()
            )
            sigma = MetaStrategy.from_json(
                (iter_dir / "sigma.json").read_text()
            )
            scores = json.loads((iter_dir / "scores.json").read_text())
            handle = _restore_handle(iter_dir, spec.game_id)
            state.payoffs.append(payoff)
            state.sigmas.append(sigma)
            state.records.append(
                IterationRecord(
                    iteration=k,
                    policy=handle,
                    nashconv=scores["nashconv"],
                    score=scores["score"],
                    per_opponent=scores["per_opponent"],
                    n_evaluations=scores["n_evaluations"],
                )
            )
            state.bank.append(handle)
            prev_payoff = payoff
            continue

        payoff = compute_payoff_matrix(
            state.bank,
            spec,
            config.pair_episodes,
            config.seed,
            runtime=config.runtime,
            prev=prev_payoff,
        )
        sigma = compute_meta_equilibrium(payoff, config.epsilon)
        certificate = meta_nashconv(sigma, payoff)
        _write(iter_dir / "payoff.csv", payoff.to_csv())
        _write(iter_dir / "payoff.json", payoff.to_json())
        _write(iter_dir / "sigma.json", sigma.to_json())

        eval_seed = derive_seed(config.seed, "oracle-eval", k)

        def evaluator(candidate, _sigma=sigma, _seed=eval_seed):
            return evaluate_policy(
                candidate,
                _sigma,
                state.bank,
                spec,
                config.eval_episodes,
                _seed,
                runtime=config.runtime,
            )

        try:
            if oracle is not None:
                result = oracle.propose(
                    spec, sigma, state.bank, evaluator,
                    id_prefix=f"k{k:03d}",
                )
            else:
                opponents = build_opponent_context(
                    sigma, state.bank, config.oracle, backend, summary_cache
                )
                result = run_oracle(
                    config.oracle.variant,
                    spec,
                    sigma,
                    state.bank,
                    config.oracle,
                    backend,
                    evaluator,
                    runtime=config.runtime,
                    opponents=opponents,
                    id_prefix=f"k{k:03d}",
                    seed=derive_seed(config.seed, "oracle", k),
                )
        except OracleFailure as exc:
            raise OracleFailure(
                f"iteration {k} oracle failed ({exc}); run directory holds "
                f"a resumable checkpoint through iteration {k - 1}"
            )

        handle = result.handle
        for index, entry in enumerate(result.log):
            _write(
                iter_dir / "llm" / f"call_{index:03d}_prompt.txt",
                entry["prompt"],
            )
            _write(
                iter_dir / "llm" / f"call_{index:03d}_completion.txt",
                entry["completion"],
            )
        _write(iter_dir / "prompt.txt", result.prompt)
        _write(iter_dir / "completion.txt", result.completion)
        _write(
            iter_dir / "policy.src",
            handle.source
            if handle.source is not None
            else f"native:{handle.metadata.get('registry_name', handle.id)}\n",
        )
        evaluation = result.evaluation
        scores_payload = {
            "policy_id": handle.id,
            "kind": handle.kind,
            "registry_name": handle.metadata.get("registry_name"),
            "nashconv": certificate,
            "n_evaluations": result.n_evaluations,
            **evaluation.to_payload(),
        }
        _write(
            iter_dir / "scores.json",
            json.dumps(scores_payload, indent=2, sort_keys=True) + "\n",
        )

        record = IterationRecord(
            iteration=k,
            policy=handle,
            nashconv=certificate,
            score=scores_payload["score"],
            per_opponent=evaluation.per_opponent,
            n_evaluations=result.n_evaluations,
        )
        if scorer is not None:
            record.population_metrics = scorer.metrics(sigma, state.bank)
            _write(
                iter_dir / "population.json",
                json.dumps(
                    record.population_metrics, indent=2, sort_keys=True
                )
                + "\n",
            )
        state.payoffs.append(payoff)
        state.sigmas.append(sigma)
        state.records.append(record)
        state.bank.append(handle)
        prev_payoff = payoff

    # Re-solve including the final policy and record both equilibria.
    final_dir = out_dir / "final"
    state.final_payoff = compute_payoff_matrix(
        state.bank,
        spec,
        config.pair_episodes,
        config.seed,
        runtime=config.runtime,
        prev=prev_payoff,
    )
    state.final_sigma = compute_meta_equilibrium(
        state.final_payoff, config.epsilon
    )
    _write(final_dir / "payoff.csv", state.final_payoff.to_csv())
    _write(final_dir / "payoff.json", state.final_payoff.to_json())
    _write(final_dir / "sigma.json", state.final_sigma.to_json())

    export_timeseries(out_dir)
    return state


def export_timeseries(run_dir) -> list[Path]:
    """Rebuild the per-iteration CSV series from the persisted artifacts.

    Re-export is idempotent: the files are a pure function of the
    iteration records on disk.
    """
    import json

    run_dir = Path(run_dir)
    iter_dirs = sorted(run_dir.glob("iter_*"))
    nashconv_rows = []
    score_rows = []
    population_rows = []
    for iter_dir in iter_dirs:
        scores_path = iter_dir / "scores.json"
        if not scores_path.exists():
            continue
        k = int(iter_dir.name.split("_")[1])
        scores = json.loads(scores_path.read_text())
        nashconv_rows.append((k, scores["nashconv"]))
        score_rows.append((k, scores["score"]))
        population_path = iter_dir / "population.json"
        if population_path.exists():
            pop = json.loads(population_path.read_text())
            population_rows.append(
                (k, pop["pop_return"], pop["pop_expl"], pop["agg_score"])
            )

    ts_dir = run_dir / "timeseries"
    written = []

    def write_csv(name: str, header: str, rows) -> None:
        out = io.StringIO()
        out.write(header + "\n")
        for row in rows:
            out.write(",".join(repr(v) if isinstance(v, float) else str(v)
                               for v in row) + "\n")
        path = ts_dir / name
        _write(path, out.getvalue())
        written.append(path)

    write_csv("nashconv.csv", "iteration,meta_nashconv", nashconv_rows)
    write_csv(
        "best_score.csv", "iteration,best_candidate_score", score_rows
    )
    if population_rows:
        write_csv(
            "population.csv",
            "iteration,pop_return,pop_expl,agg_score",
            population_rows,
        )
    return written
