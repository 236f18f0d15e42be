"""SplitMix64 stream shared by problem generation and the annealing kernels.

The compiled kernels reimplement the same recurrence in C; any change here
must be mirrored in ``_kernels.pyx``.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
INV_2_53 = 1.0 / (1 << 53)


class SplitMix64:
    """Scalar SplitMix64 generator over Python ints."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * MIX1) & MASK64
        z = ((z ^ (z >> 27)) * MIX2) & MASK64
        return z ^ (z >> 31)

    def next_double(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * INV_2_53

    def doubles(self, count: int) -> list[float]:
        return [self.next_double() for _ in range(count)]


def read_seed(seed: int, read: int) -> int:
    """Seed of the private stream used by anneal read ``read``."""
    return (seed ^ read) & MASK64


# Vectorised variant: one independent stream per array lane. Used by the
# pure-Python annealing fallback so that it reproduces the compiled kernel.

_GAMMA = np.uint64(GOLDEN_GAMMA)
_MIX1 = np.uint64(MIX1)
_MIX2 = np.uint64(MIX2)
_S30, _S27, _S31, _S11 = (np.uint64(k) for k in (30, 27, 31, 11))


def next_u64_lanes(states: np.ndarray) -> np.ndarray:
    """Advance every lane of ``states`` (uint64, in place) and return outputs."""
    with np.errstate(over="ignore"):
        states += _GAMMA
        z = states.copy()
        z ^= z >> _S30
        z *= _MIX1
        z ^= z >> _S27
        z *= _MIX2
        z ^= z >> _S31
    return z


def next_double_lanes(states: np.ndarray) -> np.ndarray:
    return (next_u64_lanes(states) >> _S11).astype(np.float64) * INV_2_53
