"""Deterministic random number generation for every stochastic choice in fdsl.

All randomness flows through SplitMix64, a tiny 64-bit generator with a
published reference (Steele, Lea & Flood 2014, as shipped in Java 8's
SplittableRandom).  It was chosen because the whole algorithm fits in a
dozen lines, so any implementation in any language can reproduce the exact
byte streams of a generated dataset.

Stream model
------------
A generator is a single 64-bit state.  Output k of seed s is::

    mix64(s + (k + 1) * GAMMA)        (mod 2**64)

which makes SplitMix64 counter-based: `stream_u64` produces outputs
vectorized with numpy, and `Rng` produces the same values one at a time.

Seed derivation for parallel work uses `mix(parent, index)`.  Child streams
for distinct indices are uncorrelated for all practical purposes, and the
derivation is order-free, so a dataset renders identically no matter how
tasks are scheduled.

Floats are drawn as ``(u >> 11) * 2**-53``, the standard 53-bit mantissa
construction, giving uniforms in [0, 1).
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
_MIX_SALT = 0xA0761D6478BD642F
_FLOAT_SCALE = 1.0 / (1 << 53)


def mix64(z: int) -> int:
    """SplitMix64 finalizer: avalanche a 64-bit value."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def mix(parent: int, index: int) -> int:
    """Derive a child seed from a parent seed and a task index.

    Used for every seed split in the pipeline: category seeds from the
    search seed, instance seeds from the category seed, and so on.
    """
    return mix64(((parent & MASK64) ^ _MIX_SALT) + (index & MASK64) * GAMMA)


class Rng:
    """Sequential SplitMix64 stream."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + GAMMA) & MASK64
        return mix64(self._state)

    def next_float(self) -> float:
        """Uniform in [0, 1) with 53-bit resolution."""
        return (self.next_u64() >> 11) * _FLOAT_SCALE

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.next_float()

    def randrange(self, n: int) -> int:
        """Uniform integer in [0, n). Floor of a scaled float draw."""
        return min(int(self.next_float() * n), n - 1)


def stream_u64(seed: int, n: int, offset: int = 0) -> np.ndarray:
    """Outputs ``offset .. offset+n-1`` of the SplitMix64 stream, vectorized.

    ``stream_u64(s, n)`` equals ``[Rng(s).next_u64() for _ in range(n)]``.
    """
    counters = np.arange(offset + 1, offset + n + 1, dtype=np.uint64)
    z = np.uint64(seed) + counters * np.uint64(GAMMA)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def stream_floats(seed: int, n: int, offset: int = 0) -> np.ndarray:
    """Vectorized counterpart of repeated `Rng.next_float` calls."""
    return (stream_u64(seed, n, offset) >> np.uint64(11)).astype(np.float64) * _FLOAT_SCALE
