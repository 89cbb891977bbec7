"""SplitMix64 random stream and seed derivation.

The generator and the draw conventions below are part of the external
contract: instance files and GA runs must reproduce bit-for-bit in any
implementation, so nothing here may depend on numpy's or Python's own RNGs.
"""

from __future__ import annotations

import math

MASK64 = 0xFFFFFFFFFFFFFFFF
GOLDEN = 0x9E3779B97F4A7C15
_INV_2_53 = 1.0 / 9007199254740992.0  # 2**-53


def mix64(z: int) -> int:
    """SplitMix64 output finalizer."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, *keys: int) -> int:
    """Fold integer keys into a seed: a pure function of ``(seed, *keys)``.

    Used to key independent substreams by (island, generation, slot) so that
    the order in which workers consume them cannot change any result.
    """
    h = seed & MASK64
    for k in keys:
        h = mix64(h ^ mix64((k + GOLDEN) & MASK64))
    return h


class SplitMix64:
    """Minimal SplitMix64 stream.

    ``uniform()`` takes the top 53 bits of the next output and scales them
    to [0, 1). ``below(n)`` is ``floor(uniform() * n)``.
    """

    __slots__ = ("state",)

    def __init__(self, seed: int) -> None:
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        return mix64(self.state)

    def uniform(self) -> float:
        return (self.next_u64() >> 11) * _INV_2_53

    def uniform_range(self, lo: float, hi: float) -> float:
        if not lo < hi:
            raise ValueError(f"empty range: lo={lo!r} must be < hi={hi!r}")
        x = lo + (hi - lo) * self.uniform()
        # lo + (hi-lo)*u can round up to hi when u is within an ulp of 1
        if x >= hi:
            x = math.nextafter(hi, lo)
        return x

    def below(self, n: int) -> int:
        return int(self.uniform() * n)


def rng_next_uniform(state: int, lo: float, hi: float) -> tuple[float, int]:
    """Functional form: draw from [lo, hi) and return ``(value, new_state)``."""
    g = SplitMix64(state)
    x = g.uniform_range(lo, hi)
    return x, g.state
