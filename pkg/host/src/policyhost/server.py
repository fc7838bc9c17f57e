"""Serve one code policy over newline-delimited JSON on stdin/stdout.

Protocol: one ``{"type": ..., "payload": ..., "seq": n}`` object per line;
every request gets exactly one response echoing ``seq``, in order. INIT
loads the policy source, seeds ``random`` from the payload and
instantiates the agent; a load failure answers with an ERROR message and
exits nonzero. Agent exceptions during play are reported as ERROR messages
with the traceback text and the process stays alive for the next request.
Clean EOF on stdin exits 0.

The agent instance lives for the whole process: its memory persists across
the hands of one match and is destroyed at process exit. No action
legality checking happens here; rules are enforced by the engine on the
other side of the pipe.
"""

from __future__ import annotations

import json
import random
import sys
import traceback

INIT = "INIT"
ACT_REQUEST = "ACT_REQUEST"
ACT_RESPONSE = "ACT_RESPONSE"
OUTCOME = "OUTCOME"
RESTART = "RESTART"
ERROR = "ERROR"


def load_agent_class(source_path: str):
    """First class defined in the source that has an ``act`` method."""
    with open(source_path, "r", encoding="utf-8") as handle:
        source = handle.read()
    if not source.strip():
        raise ValueError("policy source is empty")
    namespace = {"__name__": "hosted_policy"}
    exec(compile(source, source_path, "exec"), namespace)
    for value in namespace.values():
        if isinstance(value, type) and callable(getattr(value, "act", None)):
            return value
    raise ValueError("no class with an 'act' method in policy source")


def _send(stdout, msg_type, payload, seq) -> None:
    stdout.write(
        json.dumps(
            {"type": msg_type, "payload": payload, "seq": seq},
            separators=(",", ":"),
        )
        + "\n"
    )
    stdout.flush()


def _error(stdout, seq, stage, exc) -> None:
    _send(
        stdout,
        ERROR,
        {
            "stage": stage,
            "message": f"{type(exc).__name__}: {exc}",
            "traceback": traceback.format_exc(),
        },
        seq,
    )


def serve(source_path: str, game_id: str, stdin=None, stdout=None) -> int:
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    agent = None
    for line in stdin:
        if not line.strip():
            continue
        try:
            message = json.loads(line)
            msg_type = message["type"]
            seq = message["seq"]
            payload = message.get("payload") or {}
        except (ValueError, KeyError, TypeError) as exc:
            _error(stdout, -1, "protocol", exc)
            continue

        if msg_type == INIT:
            try:
                random.seed(payload.get("seed", 0))
                agent_class = load_agent_class(source_path)
                agent = agent_class()
            except BaseException as exc:
                _error(stdout, seq, "load", exc)
                return 1
            _send(
                stdout,
                INIT,
                {"status": "ok", "agent_class": type(agent).__name__},
                seq,
            )
        elif agent is None:
            _error(
                stdout, seq, "protocol",
                RuntimeError("request before INIT"),
            )
        elif msg_type == ACT_REQUEST:
            try:
                action = agent.act(payload["observation"])
            except BaseException as exc:
                _error(stdout, seq, "act", exc)
            else:
                _send(stdout, ACT_RESPONSE, action, seq)
        elif msg_type == RESTART:
            try:
                if hasattr(agent, "restart"):
                    agent.restart(payload["player_id"])
            except BaseException as exc:
                _error(stdout, seq, "restart", exc)
            else:
                _send(stdout, RESTART, "ok", seq)
        elif msg_type == OUTCOME:
            try:
                if hasattr(agent, "receive_outcome"):
                    agent.receive_outcome(payload["observation"])
            except BaseException as exc:
                _error(stdout, seq, "outcome", exc)
            else:
                _send(stdout, OUTCOME, "ok", seq)
        else:
            _error(
                stdout, seq, "protocol",
                RuntimeError(f"unknown message type {msg_type!r}"),
            )
    return 0
