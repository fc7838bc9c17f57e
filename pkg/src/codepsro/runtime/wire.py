"""Newline-delimited JSON wire protocol spoken with policy hosts.

Every message is one JSON object per line with the envelope
``{"type": ..., "payload": ..., "seq": n}``; responses echo ``seq``.
``ACT_RESPONSE`` payloads are a single action string; observation payloads
are the exact game observation schemas.
"""

from __future__ import annotations

import json

INIT = "INIT"
ACT_REQUEST = "ACT_REQUEST"
ACT_RESPONSE = "ACT_RESPONSE"
OUTCOME = "OUTCOME"
RESTART = "RESTART"
ERROR = "ERROR"

MESSAGE_TYPES = (INIT, ACT_REQUEST, ACT_RESPONSE, OUTCOME, RESTART, ERROR)


def encode(msg_type: str, payload, seq: int) -> str:
    """Serialize one envelope to a single line (newline included)."""
    return (
        json.dumps(
            {"type": msg_type, "payload": payload, "seq": seq},
            separators=(",", ":"),
        )
        + "\n"
    )


def decode(line: str) -> dict:
    """Parse one envelope line; raises ValueError on any malformation."""
    obj = json.loads(line)
    if not isinstance(obj, dict):
        raise ValueError("message is not an object")
    if obj.get("type") not in MESSAGE_TYPES:
        raise ValueError(f"unknown message type {obj.get('type')!r}")
    if not isinstance(obj.get("seq"), int):
        raise ValueError("missing integer seq")
    if "payload" not in obj:
        raise ValueError("missing payload")
    return obj
