"""Portable 64-bit pseudo random numbers.

xorshift64* (Vigna 2016) seeded through one splitmix64 round, so that any
integer seed (including 0) gives a nonzero state. The same sequence is
reproducible bit-for-bit in any language with 64-bit unsigned arithmetic:

    state  = splitmix64(seed)
    x ^= x >> 12; x ^= x << 25; x ^= x >> 27        (mod 2^64)
    output = x * 0x2545F4914F6CDD1D                  (mod 2^64)
    float  = (output >> 11) * 2^-53                  in [0, 1)
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_MULTIPLIER = 0x2545F4914F6CDD1D
_GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_FALLBACK_STATE = 0x853C49E6748FEA9B
_INV_2_53 = 1.0 / (1 << 53)


def splitmix64(value: int) -> int:
    """One splitmix64 output for the state ``value``."""
    z = (value + _GOLDEN_GAMMA) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


class Xorshift64Star:
    """xorshift64* generator; single consumer, not thread-safe."""

    __slots__ = ("_state", "seed")

    def __init__(self, seed: int) -> None:
        self.seed = seed & _MASK64
        self._state = splitmix64(self.seed) or _FALLBACK_STATE

    def next_u64(self) -> int:
        x = self._state
        x ^= x >> 12
        x ^= (x << 25) & _MASK64
        x ^= x >> 27
        self._state = x
        return (x * _MULTIPLIER) & _MASK64

    def next_float(self) -> float:
        """Uniform double in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * _INV_2_53


__all__ = ["Xorshift64Star", "splitmix64"]
