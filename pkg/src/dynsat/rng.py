"""xoshiro256** generator seeded through SplitMix64.

Both kernel backends draw from the same four-word state, so a given seed
produces the same flip trajectory whichever backend is active.
"""
from __future__ import annotations

from array import array

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> tuple[int, int]:
    """Advance a SplitMix64 state; returns ``(new_state, output)``."""
    x = (x + _GOLDEN) & MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return x, z ^ (z >> 31)


def derive_seed(seed: int, *salt: int) -> int:
    """Mix ``salt`` integers into ``seed`` to get an independent 64-bit seed."""
    x = seed & MASK64
    for s in salt:
        x, out = splitmix64(x ^ (s & MASK64))
        x = out
    return x


def seed_state(seed: int) -> array:
    x = seed & MASK64
    words = []
    for _ in range(4):
        x, out = splitmix64(x)
        words.append(out)
    return array("Q", words)


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & MASK64


def next_u64(s: array) -> int:
    s0, s1, s2, s3 = s[0], s[1], s[2], s[3]
    result = (_rotl((s1 * 5) & MASK64, 7) * 9) & MASK64
    t = (s1 << 17) & MASK64
    s2 ^= s0
    s3 ^= s1
    s1 ^= s2
    s0 ^= s3
    s2 ^= t
    s3 = _rotl(s3, 45)
    s[0], s[1], s[2], s[3] = s0, s1, s2, s3
    return result


def uniform(s: array, n: int) -> int:
    """Integer in ``[0, n)`` by multiply-shift on the high 32 bits; ``n < 2**32``."""
    return ((next_u64(s) >> 32) * n) >> 32


def coin(s: array, threshold: int) -> bool:
    """True with probability ``threshold / 2**53``."""
    return (next_u64(s) >> 11) < threshold


def noise_threshold(noise: float) -> int:
    return int(noise * (1 << 53))


class Rng:
    """Thin object wrapper for callers that want a stream, not a state array."""

    def __init__(self, seed: int):
        self.state = seed_state(seed)

    def next_u64(self) -> int:
        return next_u64(self.state)

    def uniform(self, n: int) -> int:
        return uniform(self.state, n)

    def bit(self) -> bool:
        return bool(next_u64(self.state) >> 63)
