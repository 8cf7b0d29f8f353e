"""SplitMix64 pseudorandom generator.

Corpora must be byte-identical across machines and runtimes, so the simulator
never touches the platform RNG. SplitMix64 is a tiny, widely specified 64-bit
mixer; every sampling stream is derived from (seed, label) so adding a new
consumer never perturbs existing streams.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def _fnv1a(label: str) -> int:
    h = 0xCBF29CE484222325
    for byte in label.encode("utf-8"):
        h = ((h ^ byte) * 0x100000001B3) & _MASK64
    return h


class SplitMix64:
    """Deterministic 64-bit generator with labeled substreams."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        return _mix(self._state)

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        u = (self.next_u64() >> 11) * (1.0 / (1 << 53))
        return lo + u * (hi - lo)

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi] inclusive."""
        if hi < lo:
            raise ValueError("empty range")
        return lo + self.next_u64() % (hi - lo + 1)

    def choice(self, seq):
        if not seq:
            raise ValueError("empty sequence")
        return seq[self.randint(0, len(seq) - 1)]

    def stream(self, label: str) -> "SplitMix64":
        """Independent child stream identified by a stable label."""
        return SplitMix64(_mix(self._state ^ _fnv1a(label)))


def stream_for(seed: int, label: str) -> SplitMix64:
    return SplitMix64(_mix((seed & _MASK64) ^ _fnv1a(label)))
