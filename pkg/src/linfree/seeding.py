"""Deterministic seed derivation.

Sub-seeds are derived from a base seed and integer salts by iterating a
splitmix64-style mix, so batch runs can hand out independent streams whose
contents do not depend on processing order.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1


def splitmix64(x: int) -> int:
    z = (x + 0x9E3779B97F4A7C15) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def derive_seed(base: int, *salts: int) -> int:
    """Mix `base` with any number of integer salts into a fresh seed."""
    value = splitmix64(base & _MASK)
    for salt in salts:
        value = splitmix64(value ^ (salt & _MASK))
    return value
