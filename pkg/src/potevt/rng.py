"""
SplitMix64 uniform stream.

The i-th output (i = 0, 1, ...) for seed s is the SplitMix64 finalizer
applied to ``s + (i + 1) * GOLDEN`` modulo 2**64:

    z = (z ^ (z >> 30)) * MIX1
    z = (z ^ (z >> 27)) * MIX2
    z =  z ^ (z >> 31)

A uniform in the open interval (0, 1) is ``((z >> 12) + 0.5) * 2**-52``.
Being counter-based, the stream is computed in one vectorized pass and is
identical on every platform.
"""

from __future__ import annotations

import numpy as np

GOLDEN = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
_MASK = (1 << 64) - 1


def splitmix64(seed: int, n: int) -> np.ndarray:
    """First ``n`` raw 64-bit outputs for ``seed`` as a uint64 array."""
    if n < 0:
        raise ValueError("n must be non-negative")
    i = np.arange(1, n + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed & _MASK) + i * np.uint64(GOLDEN)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX2)
        z = z ^ (z >> np.uint64(31))
    return z


def splitmix64_scalar(seed: int, i: int) -> int:
    """Pure-integer reference for output ``i``; used to check the vectorized path."""
    z = (seed + (i + 1) * GOLDEN) & _MASK
    z = ((z ^ (z >> 30)) * MIX1) & _MASK
    z = ((z ^ (z >> 27)) * MIX2) & _MASK
    return z ^ (z >> 31)


def uniforms(seed: int, n: int) -> np.ndarray:
    """``n`` seeded uniforms strictly inside (0, 1)."""
    z = splitmix64(seed, n) >> np.uint64(12)
    return (z.astype(np.float64) + 0.5) * 2.0 ** -52
