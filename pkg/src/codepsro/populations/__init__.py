"""Named heuristic opponent populations for both games."""

from __future__ import annotations

from ..games.base import REPEATED_LEDUC, RRPS
from ..runtime.handles import PolicyHandle
from .leduc_bots import (
    AlwaysCall,
    AlwaysFold,
    LeducHeuristicBot,
    leduc_heuristics,
)
from .rrps_bots import BotDescriptor, RandBot, rrps_population

__all__ = [
    "AlwaysCall",
    "AlwaysFold",
    "BotDescriptor",
    "LeducHeuristicBot",
    "bot_handle",
    "leduc_heuristics",
    "named_policy_registry",
    "population_handles",
    "resolve_policy",
    "rrps_population",
]


def bot_handle(descriptor: BotDescriptor, prefix: str | None = None) -> PolicyHandle:
    game_short = "rrps" if descriptor.game_id == RRPS else "leduc"
    name = f"{prefix or game_short}/{descriptor.name}"
    return PolicyHandle.native(
        name,
        descriptor.game_id,
        descriptor.factory,
        description=descriptor.description,
    )


def population_handles(game_id: str) -> list[PolicyHandle]:
    """All documented bots for a game, as ready-to-play handles."""
    if game_id == RRPS:
        return [bot_handle(d) for d in rrps_population()]
    if game_id == REPEATED_LEDUC:
        return [bot_handle(d) for d in leduc_heuristics()]
    raise ValueError(f"unknown game_id {game_id!r}")


def named_policy_registry() -> dict[str, PolicyHandle]:
    """Stable name -> handle map used by configs, checkpoints and the CLI."""
    registry: dict[str, PolicyHandle] = {}
    for descriptor in rrps_population():
        handle = bot_handle(descriptor)
        registry[handle.id] = handle
    for descriptor in leduc_heuristics():
        handle = bot_handle(descriptor)
        registry[handle.id] = handle
    registry["init/rrps_uniform"] = PolicyHandle.native(
        "init/rrps_uniform", RRPS, RandBot,
        description="uniform random seed policy",
    )
    registry["init/leduc_heuristic"] = PolicyHandle.native(
        "init/leduc_heuristic", REPEATED_LEDUC, LeducHeuristicBot,
        description="card-strength starter policy",
    )
    return registry


def resolve_policy(name: str) -> PolicyHandle:
    registry = named_policy_registry()
    if name not in registry:
        known = ", ".join(sorted(registry))
        raise KeyError(f"unknown policy {name!r}; known: {known}")
    return registry[name]
