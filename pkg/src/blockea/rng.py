"""Seeded, platform-independent random source.

The stream algorithm is splitmix64 (Vigna's reference constants): a 64-bit
counter generator whose output sequence depends only on the seed, so the
same seed reproduces the same draws in any implementation, including the
standalone code bundles emitted by `blockea.codegen`.

Derived streams use the splitmix64 output sequence itself:
``derive_seed(master, i)`` equals the ``(i + 1)``-th raw output of a
splitmix64 stream seeded with ``master`` (indices taken mod 2**64, so
``derive_seed(master, -1)`` is the finalizer applied to ``master``).
Test vectors live in ``tests/test_rng.py``.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15

_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """splitmix64 finalizer: bijective 64-bit mixing."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


def derive_seed(master_seed: int, stream_index: int) -> int:
    """Seed for an isolated child stream (run or worker task).

    Order-independent: stream i's seed does not depend on how many other
    streams were derived, which is what makes parallel runs reproducible.
    """
    return mix64(master_seed + ((stream_index + 1) * GOLDEN)) & MASK64


class RandomSource:
    """Single-owner deterministic random stream.

    Never share an instance between threads; derive one per worker with
    `derive_seed` instead.
    """

    __slots__ = ("seed", "_state")

    def __init__(self, seed: int):
        self.seed = seed & MASK64
        self._state = seed & MASK64

    def next_uint64(self) -> int:
        self._state = (self._state + GOLDEN) & MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & MASK64
        return z ^ (z >> 31)

    def next_below(self, bound: int) -> int:
        """Uniform integer in [0, bound); rejection sampling, no modulo bias."""
        if bound < 1:
            raise ValueError(f"bound must be >= 1, got {bound}")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            r = self.next_uint64()
            if r < limit:
                return r % bound

    def next_int(self, lo: int, hi: int) -> int:
        """Uniform integer in the inclusive range [lo, hi]."""
        if lo > hi:
            raise ValueError(f"empty range [{lo}, {hi}]")
        return lo + self.next_below(hi - lo + 1)

    def next_float(self) -> float:
        """Uniform double in [0, 1) with 53 random bits."""
        return (self.next_uint64() >> 11) * (1.0 / (1 << 53))

    def next_bool(self) -> bool:
        return bool(self.next_uint64() >> 63)
