"""Seeded SplitMix64 stream; every random choice in the package goes through it."""

from __future__ import annotations

_MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int = 0):
        self.state = seed & _MASK

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)``, by rejection (bound may exceed 2^64)."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        nbits = bound.bit_length()
        while True:
            x = 0
            for _ in range((nbits + 63) // 64):
                x = (x << 64) | self.next()
            x >>= (-nbits) % 64
            if x < bound:
                return x

    def integer(self, lo: int, hi: int) -> int:
        """Uniform integer in the closed range ``[lo, hi]``."""
        return lo + self.below(hi - lo + 1)
