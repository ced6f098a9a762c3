"""Self-contained seeded random number generation for reproducible shuffles.

SplitMix64 is used as the bit source: it is tiny, fast, platform
independent, and has published reference outputs (seed 0 produces
0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F, ...), so a
shuffle driven by it is bit-reproducible on any interpreter and OS.
"""

from __future__ import annotations

from typing import MutableSequence

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


class SplitMix64:
    """SplitMix64 generator (Steele, Lea & Flood's mixing constants)."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_uint64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection, free of modulo bias."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            u = self.next_uint64()
            if u < limit:
                return u % n

    def shuffle(self, items: MutableSequence) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]


def child_seed(master_seed: int, index: int) -> int:
    """Per-shuffle seed: the (index+1)-th output of SplitMix64(master_seed).

    Successive outputs of the generator are statistically independent, so
    distinct indices yield non-colliding seed streams.
    """
    if index < 0:
        raise ValueError("index must be non-negative")
    state = (master_seed + (index + 1) * _GAMMA) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)
