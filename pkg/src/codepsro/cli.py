"""Command-line surface.

Subcommands: ``run`` (full loop from a config file), ``eval`` (population
report for one policy), ``payoff`` (cross-table for a named bank),
``solve-leduc`` (CFR+ profile and exploitability curve), ``arena`` (RRPS
population cross-table) and ``replay`` (re-execute a logged match).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .cfr.best_response import exploitability
from .cfr.solver import CfrPlusSolver, StrategyProfile
from .cfr.table_policy import as_policy
from .errors import CodePsroError
from .games.base import MatchResult, RepeatedGameSpec, RRPS
from .games.match import play_match
from .metagame.payoff import compute_payoff_matrix
from .metrics import evaluate_against_population, per_opponent_returns
from .populations import named_policy_registry, population_handles
from .run import RunConfig, resolve_population, run
from .runtime.handles import PolicyHandle
from .seeding import derive_seed


def main(argv=None) -> int:
    parser = _build_parser()
    args, extras = parser.parse_known_args(argv)
    overrides = _parse_overrides(extras, parser)
    try:
        return args.entry(args, overrides)
    except CodePsroError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _parse_overrides(extras, parser) -> dict:
    overrides = {}
    for token in extras:
        if token.startswith("--") and "=" in token:
            key, value = token[2:].split("=", 1)
            overrides[key] = value
        else:
            parser.error(f"unrecognized argument: {token}")
    return overrides


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="codepsro", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run the response-oracle loop")
    p.add_argument("--config", required=True)
    p.set_defaults(entry=_cmd_run)

    p = sub.add_parser("eval", help="population report for one policy")
    p.add_argument("--game", default=RRPS)
    p.add_argument("--agent", required=True,
                   help="registry name, code:<file.py> or cfr:<profile.json>")
    p.add_argument("--population", required=True)
    p.add_argument("--cfr-profile", default=None)
    p.add_argument("--episodes", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rounds", type=int, default=0)
    p.add_argument("--stake-mode", default="ante")
    p.add_argument("--out", default=None, help="report JSON path")
    p.add_argument("--csv", default=None, help="report CSV path")
    p.set_defaults(entry=_cmd_eval)

    p = sub.add_parser("payoff", help="payoff cross-table for a bank")
    p.add_argument("--game", default=RRPS)
    p.add_argument("--bank", required=True,
                   help="comma-separated registry names")
    p.add_argument("--episodes", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rounds", type=int, default=0)
    p.add_argument("--stake-mode", default="ante")
    p.add_argument("--out", default=None, help="CSV path (default stdout)")
    p.add_argument("--json", dest="json_out", default=None)
    p.set_defaults(entry=_cmd_payoff)

    p = sub.add_parser("solve-leduc", help="CFR+ profile + curve")
    p.add_argument("--iterations", type=int, default=10000)
    p.add_argument("--stake-mode", default="ante")
    p.add_argument("--out", required=True, help="profile JSON path")
    p.add_argument("--curve", default=None,
                   help="exploitability-vs-iteration CSV path")
    p.add_argument("--checkpoints", default="100,1000,10000")
    p.set_defaults(entry=_cmd_solve_leduc)

    p = sub.add_parser("arena", help="RRPS population cross-table")
    p.add_argument("--episodes", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rounds", type=int, default=0)
    p.add_argument("--out", default=None, help="CSV path (default stdout)")
    p.add_argument("--transcripts-dir", default=None,
                   help="save one replayable transcript per pairing")
    p.set_defaults(entry=_cmd_arena)

    p = sub.add_parser("replay", help="re-execute a logged match")
    p.add_argument("--transcript", required=True)
    p.add_argument("--stake-mode", default=None,
                   help="override stake mode (defaults to the logged one)")
    p.set_defaults(entry=_cmd_replay)

    return parser


def _cmd_run(args, overrides) -> int:
    config = RunConfig.from_yaml(args.config, overrides)
    state = run(config)
    final = state.final_sigma
    print(f"completed {config.iterations} iterations; bank size "
          f"{len(state.bank)}")
    print("final sigma:")
    for bank_id, prob in zip(final.bank_ids, final.probs):
        if prob > 0:
            print(f"  {bank_id}: {prob:.4f}")
    return 0


def _resolve_agent(token: str, game_id: str) -> PolicyHandle:
    registry = named_policy_registry()
    if token in registry:
        return registry[token]
    if token.startswith("code:"):
        path = Path(token[5:])
        return PolicyHandle.from_source(
            f"code:{path.stem}", game_id, path.read_text()
        )
    if token.startswith("cfr:"):
        profile = StrategyProfile.from_json(Path(token[4:]).read_text())
        return as_policy(profile, handle_id=token)
    raise CodePsroError(
        f"unknown agent {token!r}; use a registry name, code:<file> or "
        "cfr:<profile.json>"
    )


def _spec(game, rounds, stake_mode) -> RepeatedGameSpec:
    return RepeatedGameSpec(
        game_id=game, num_rounds=rounds, stake_mode=stake_mode
    )


def _cmd_eval(args, overrides) -> int:
    spec = _spec(args.game, args.rounds, args.stake_mode)
    agent = _resolve_agent(args.agent, spec.game_id)
    population = resolve_population(args.population, args.cfr_profile)
    report = evaluate_against_population(
        agent, population, spec, args.episodes, args.seed
    )
    if args.out:
        Path(args.out).write_text(report.to_json())
    if args.csv:
        Path(args.csv).write_text(report.to_csv())
    print(report.to_csv(), end="")
    return 0


def _cmd_payoff(args, overrides) -> int:
    spec = _spec(args.game, args.rounds, args.stake_mode)
    bank = [_resolve_agent(t.strip(), spec.game_id)
            for t in args.bank.split(",") if t.strip()]
    matrix = compute_payoff_matrix(bank, spec, args.episodes, args.seed)
    if args.out:
        Path(args.out).write_text(matrix.to_csv())
    if args.json_out:
        Path(args.json_out).write_text(matrix.to_json())
    print(matrix.to_csv(), end="")
    return 0


def _cmd_solve_leduc(args, overrides) -> int:
    checkpoints = sorted(
        {int(c) for c in args.checkpoints.split(",") if c.strip()}
    )
    if args.iterations not in checkpoints:
        checkpoints.append(args.iterations)
        checkpoints.sort()
    checkpoints = [c for c in checkpoints if c <= args.iterations]
    solver = CfrPlusSolver(args.stake_mode)
    rows = []
    for target in checkpoints:
        solver.run(target - solver.iterations_done)
        value = exploitability(
            solver.average_profile(), args.stake_mode
        )
        rows.append((target, value))
        print(f"iterations {target}: exploitability {value:.6f}")
    profile = solver.average_profile()
    Path(args.out).write_text(profile.to_json())
    if args.curve:
        lines = ["iterations,exploitability"]
        lines += [f"{t},{v!r}" for t, v in rows]
        Path(args.curve).write_text("\n".join(lines) + "\n")
    return 0


def _cmd_arena(args, overrides) -> int:
    spec = _spec(RRPS, args.rounds, "ante")
    bots = population_handles(RRPS)
    lines = ["bot_name,opponent,mean_return,stderr"]
    transcripts_dir = (
        Path(args.transcripts_dir) if args.transcripts_dir else None
    )
    for bot in bots:
        stats = per_opponent_returns(
            bot, [b for b in bots if b.id != bot.id], spec,
            args.episodes, args.seed,
        )
        for opponent_id in sorted(stats):
            stat = stats[opponent_id]
            lines.append(
                f"{bot.id},{opponent_id},{stat.mean!r},{stat.stderr!r}"
            )
        if transcripts_dir is not None:
            transcripts_dir.mkdir(parents=True, exist_ok=True)
            for opponent in bots:
                if opponent.id == bot.id:
                    continue
                seed = derive_seed(args.seed, "popeval", bot.id,
                                   opponent.id, 0)
                result = play_match(spec, bot, opponent, seed, lenient=True)
                name = (f"{bot.id}_vs_{opponent.id}.json"
                        .replace("/", "_"))
                (transcripts_dir / name).write_text(result.to_json())
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    print(text, end="")
    return 0


def _cmd_replay(args, overrides) -> int:
    logged = MatchResult.from_json(Path(args.transcript).read_text())
    transcript = logged.transcript
    refs = transcript.get("policies")
    if not refs:
        raise CodePsroError("transcript carries no policy references")
    game_id = transcript["game"]
    stake_mode = args.stake_mode or transcript.get("stake_mode", "ante")
    spec = RepeatedGameSpec(
        game_id=game_id,
        num_rounds=transcript["num_rounds"],
        stake_mode=stake_mode,
    )
    policies = [_policy_from_ref(ref, game_id) for ref in refs]
    rerun = play_match(
        spec, policies[0], policies[1], logged.seed, lenient=True
    )
    if rerun.transcript == transcript and rerun.returns == logged.returns:
        print(f"replay OK: returns {list(rerun.returns)}")
        return 0
    print("replay MISMATCH", file=sys.stderr)
    print(f"logged returns: {list(logged.returns)}", file=sys.stderr)
    print(f"replayed returns: {list(rerun.returns)}", file=sys.stderr)
    return 2


def _policy_from_ref(ref: dict, game_id: str) -> PolicyHandle:
    kind = ref.get("kind")
    if kind == "code":
        return PolicyHandle.from_source(ref["id"], game_id, ref["source"])
    if kind == "native":
        registry = named_policy_registry()
        name = ref.get("registry_name", ref["id"])
        if name in registry:
            return registry[name]
    raise CodePsroError(
        f"cannot rebuild policy {ref.get('id')!r} of kind {kind!r}; replay "
        "supports registry natives and embedded code policies"
    )


if __name__ == "__main__":
    raise SystemExit(main())
