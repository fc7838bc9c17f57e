import sys
from pathlib import Path

import pytest

from codepsro.games.base import (
    REPEATED_LEDUC,
    RepeatedGameSpec,
    RRPS,
)

HOST_DIR = Path(__file__).resolve().parent.parent / "host"


def host_command() -> str | None:
    """The external policy-host command, if the secondary package exists."""
    if (HOST_DIR / "src" / "policyhost" / "__main__.py").exists():
        return (
            f"{sys.executable} -m policyhost"
        )
    return None


@pytest.fixture
def rrps_spec():
    return RepeatedGameSpec(RRPS)


@pytest.fixture
def rrps_short():
    return RepeatedGameSpec(RRPS, num_rounds=50)


@pytest.fixture
def leduc_spec():
    return RepeatedGameSpec(REPEATED_LEDUC)


@pytest.fixture
def leduc_short():
    return RepeatedGameSpec(REPEATED_LEDUC, num_rounds=10)
