"""Deterministic seeded randomness.

One generator is threaded explicitly through every randomized operation:
SplitMix64, the 64-bit counter-based mixer (Steele, Lea & Flood 2014).  No
global state, identical streams on every platform.
"""

from __future__ import annotations

from fractions import Fraction

_MASK = (1 << 64) - 1


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def randrange(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection sampling."""
        if n <= 0:
            raise ValueError("empty range")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            u = self.next_u64()
            if u < limit:
                return u % n

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi], inclusive."""
        return lo + self.randrange(hi - lo + 1)

    def nonzero_int(self, bound: int) -> int:
        while True:
            v = self.randint(-bound, bound)
            if v != 0:
                return v

    def choice(self, seq):
        return seq[self.randrange(len(seq))]

    def fraction(self, bound: int, max_den: int = 1) -> Fraction:
        den = self.randint(1, max_den)
        return Fraction(self.randint(-bound * den, bound * den), den)

    def distinct_fractions(self, count: int, bound: int, max_den: int = 1, avoid=()):
        """``count`` pairwise distinct rationals avoiding the given values."""
        avoid = set(Fraction(a) for a in avoid)
        out = []
        attempts = 0
        while len(out) < count:
            attempts += 1
            if attempts > 200 * count + 200:
                raise ValueError("cannot draw enough distinct values; widen bound")
            v = self.fraction(bound, max_den)
            if v not in avoid:
                avoid.add(v)
                out.append(v)
        return out

    def int_vector(self, length: int, bound: int):
        return [self.randint(-bound, bound) for _ in range(length)]

    def nonzero_int_vector(self, length: int, bound: int):
        while True:
            v = self.int_vector(length, bound)
            if any(x != 0 for x in v):
                return v

    def spawn(self) -> "SplitMix64":
        """Independent child stream (seeded from this stream)."""
        return SplitMix64(self.next_u64())
