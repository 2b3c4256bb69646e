"""Deterministic seed derivation and variable substitutions.

All randomness in the package flows through these helpers so that a run is
fully reproducible from a single 64-bit seed, independent of platform,
hash randomization, and iteration order.
"""

from __future__ import annotations

import hashlib


def derive_seed(seed: int, tag: str) -> int:
    """64-bit child seed for a named sub-computation."""
    digest = hashlib.sha256(f"detgraph:{seed}:{tag}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def sigma_value(seed: int, var_id: int, p: int) -> int:
    """Substitution value for a variable, uniform over [1, p-1].

    Zero is excluded: a zero substitution silently deletes the edge the
    variable stands for, which buys nothing and wastes error budget.
    """
    digest = hashlib.sha256(f"detgraph:sigma:{seed}:{var_id}".encode()).digest()
    return 1 + int.from_bytes(digest[:16], "big") % (p - 1)


def uniform_value(seed: int, counter: int, p: int) -> int:
    """Uniform draw from [0, p-1]; used by calibration experiments."""
    digest = hashlib.sha256(f"detgraph:uniform:{seed}:{counter}".encode()).digest()
    return int.from_bytes(digest[:16], "big") % p
