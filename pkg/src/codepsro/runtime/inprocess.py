"""Trusted in-process execution of code policies.

Used whenever no external policy host is configured, which keeps the whole
oracle loop runnable in a single process (mock-backend experiments, tests).
This is plain ``exec`` of trusted/generated-in-sandbox sources, not a
sandbox: untrusted code should go through the host process boundary.

Code policies typically use the global ``random`` module, so ``reset``
seeds it from the per-match policy seed; with the default sequential match
execution this keeps every run reproducible.
"""

from __future__ import annotations

import random

from ..errors import PolicyLoadError, PolicyStepError
from ..games.base import Policy


def load_agent_class(source: str):
    """Compile ``source`` and return the first class defining ``act``."""
    if not source or not source.strip():
        raise PolicyLoadError("empty policy source")
    namespace = {"__name__": "hosted_policy"}
    try:
        exec(compile(source, "<policy>", "exec"), namespace)
    except BaseException as exc:  # syntax errors, import failures, ...
        raise PolicyLoadError(f"policy source failed to load: {exc!r}")
    for value in namespace.values():
        if isinstance(value, type) and callable(getattr(value, "act", None)):
            return value
    raise PolicyLoadError("no class with an 'act' method in policy source")


class InProcessCodePolicy(Policy):
    """Instantiate and drive a code policy inside the current process."""

    def __init__(self, source: str):
        self._source = source
        self._agent_class = load_agent_class(source)
        self._agent = None

    def reset(self, seed: int) -> None:
        random.seed(seed)
        try:
            self._agent = self._agent_class()
        except BaseException as exc:
            raise PolicyLoadError(f"agent constructor failed: {exc!r}")

    def act(self, observation: dict) -> str:
        return self._call("act", observation)

    def restart(self, player_id: int) -> None:
        if hasattr(self._agent, "restart"):
            self._call("restart", player_id)

    def receive_outcome(self, observation: dict) -> None:
        if hasattr(self._agent, "receive_outcome"):
            self._call("receive_outcome", observation)

    def _call(self, method, arg):
        if self._agent is None:
            raise PolicyStepError("error", "policy used before reset()")
        try:
            return getattr(self._agent, method)(arg)
        except BaseException as exc:
            raise PolicyStepError("error", f"{method} raised {exc!r}")
