"""Policy handles and the code-policy executors."""

from .handles import (
    CFR_TABLE,
    CODE,
    NATIVE,
    PolicyHandle,
    RuntimeConfig,
    spawn_code_policy,
)
from .inprocess import InProcessCodePolicy, load_agent_class
from .subprocess_policy import SubprocessCodePolicy

__all__ = [
    "CFR_TABLE",
    "CODE",
    "NATIVE",
    "InProcessCodePolicy",
    "PolicyHandle",
    "RuntimeConfig",
    "SubprocessCodePolicy",
    "load_agent_class",
    "spawn_code_policy",
]
