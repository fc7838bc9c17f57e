"""Deterministic seed derivation.

Every stochastic component in the package draws from a seed derived
functionally from a master seed plus a label path. This makes results
identical regardless of execution order or parallel schedule, and makes
interrupted runs resumable without carrying RNG state.
"""

import hashlib
import random


def derive_seed(*parts) -> int:
    """Derive a 63-bit seed from an arbitrary label path."""
    text = "\x1f".join(str(p) for p in parts)
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def derive_rng(*parts) -> random.Random:
    return random.Random(derive_seed(*parts))
