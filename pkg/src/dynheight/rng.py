"""Deterministic 64-bit linear congruential generator.

Used wherever the package needs seeded randomness (synthetic model
generation, CLI sampling) so that identical invocations produce identical
output bytes on any platform.  Constants are Knuth's MMIX multiplier and
increment.
"""

from __future__ import annotations

from fractions import Fraction

__all__ = ["Lcg64"]

_MULT = 6364136223846793005
_INC = 1442695040888963407
_MASK = (1 << 64) - 1


class Lcg64:
    """x_{n+1} = (a * x_n + c) mod 2^64; high 32 bits are returned."""

    __slots__ = ("state", "seed")

    def __init__(self, seed: int):
        self.seed = int(seed)
        self.state = (self.seed ^ 0x9E3779B97F4A7C15) & _MASK
        for _ in range(4):
            self._step()

    def _step(self) -> int:
        self.state = (_MULT * self.state + _INC) & _MASK
        return self.state >> 32

    def below(self, n: int) -> int:
        """Uniformish integer in [0, n)."""
        if n <= 0:
            raise ValueError("below() needs a positive bound")
        return self._step() % n

    def randint(self, lo: int, hi: int) -> int:
        """Integer in [lo, hi] inclusive."""
        return lo + self.below(hi - lo + 1)

    def choice(self, seq):
        return seq[self.below(len(seq))]

    def small_fraction(self, num_bound: int = 4, den_bound: int = 4) -> Fraction:
        """Rational with |numerator| <= num_bound, denominator <= den_bound."""
        return Fraction(self.randint(-num_bound, num_bound), self.randint(1, den_bound))
