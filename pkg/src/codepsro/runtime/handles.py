"""Uniform handles over the three policy representations.

A ``PolicyHandle`` names a playable strategy without owning live state:
``instantiate`` builds a fresh per-match ``Policy`` instance. Code policies
run through the external host when ``policy_host_cmd`` is configured and
in-process otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import PolicyLoadError
from ..games.base import Policy
from .inprocess import InProcessCodePolicy, load_agent_class
from .subprocess_policy import SubprocessCodePolicy

NATIVE = "native"
CFR_TABLE = "cfr_table"
CODE = "code"


@dataclass(frozen=True)
class RuntimeConfig:
    """How code policies are executed."""

    policy_host_cmd: str | None = None
    move_timeout: float = 1.0
    handshake_timeout: float = 5.0


@dataclass(frozen=True)
class PolicyHandle:
    id: str
    kind: str
    game_id: str
    source: str | None = None
    factory: object = None  # zero-argument callable for native/table kinds
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind == CODE:
            if not self.source or not self.source.strip():
                raise ValueError("CODE handles need a nonempty source")
        elif self.factory is None:
            raise ValueError(f"{self.kind} handles need a factory")

    @classmethod
    def native(cls, handle_id, game_id, factory, **metadata):
        return cls(
            id=handle_id,
            kind=NATIVE,
            game_id=game_id,
            factory=factory,
            metadata=metadata,
        )

    @classmethod
    def from_source(cls, handle_id, game_id, source, **metadata):
        return cls(
            id=handle_id,
            kind=CODE,
            game_id=game_id,
            source=source,
            metadata=metadata,
        )

    def instantiate(self, runtime: RuntimeConfig | None = None) -> Policy:
        if self.kind == CODE:
            if runtime is not None and runtime.policy_host_cmd:
                return SubprocessCodePolicy(self.source, self.game_id, runtime)
            return InProcessCodePolicy(self.source)
        return self.factory()

    def describe(self) -> dict:
        """JSON-friendly reference used in transcripts and run checkpoints."""
        ref = {"id": self.id, "kind": self.kind, "game_id": self.game_id}
        if self.kind == CODE:
            ref["source"] = self.source
        if "registry_name" in self.metadata:
            ref["registry_name"] = self.metadata["registry_name"]
        return ref


def spawn_code_policy(
    source: str, game_id: str, runtime: RuntimeConfig | None = None,
    handle_id: str = "code_policy", **metadata,
) -> PolicyHandle:
    """Validate a program text and wrap it as a playable handle.

    With a host configured this launches the host once (INIT handshake) so
    load errors (syntax errors, missing agent class, import failures)
    surface here rather than mid-match; otherwise the source is compiled
    in-process. Returns a handle usable in ``play_match``.
    """
    if not source or not source.strip():
        raise PolicyLoadError("empty policy source")
    if runtime is not None and runtime.policy_host_cmd:
        probe = SubprocessCodePolicy(source, game_id, runtime)
        try:
            probe.reset(0)
        finally:
            probe.close()
    else:
        load_agent_class(source)
    return PolicyHandle.from_source(handle_id, game_id, source, **metadata)
