"""Shipped example code policies and prompt template texts."""

from importlib import resources


def load_text(name: str) -> str:
    return (
        resources.files(__package__).joinpath(name).read_text(encoding="utf-8")
    )


def rrps_ensemble_agent_source() -> str:
    """Ensemble predictor agent for repeated rock-paper-scissors."""
    return load_text("rrps_ensemble_agent.py")


def leduc_ev_bot_source() -> str:
    """Expected-value Leduc bot with an opponent action model."""
    return load_text("leduc_ev_bot.py")


def leduc_heuristic_bot_source() -> str:
    """Card-strength starter bot; also the repeated-Leduc seed policy."""
    return load_text("leduc_heuristic_bot.py")


def rrps_prompt_template() -> str:
    return load_text("rrps_prompt.txt")


def leduc_prompt_template() -> str:
    return load_text("leduc_prompt.txt")


def patch_rules_text() -> str:
    return load_text("patch_rules.txt")
