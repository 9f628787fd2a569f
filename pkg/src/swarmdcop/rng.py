"""Portable deterministic random streams.

Everything random in this package flows through two primitives built on the
SplitMix64 mixing function, so any run is reproducible bit-for-bit from its
seed and re-implementable in another language from this file alone:

* ``SplitMix64`` -- a sequential 64-bit stream used by the instance generator.
* ``keyed_uniforms`` -- stateless counter-based streams used by the solver.
  The uniform consumed by (agent ordinal, particle, iteration, draw slot) is a
  pure function of the key tuple, which is what lets the distributed runtime
  and the centralized reference consume identical randomness.

All arithmetic is modulo 2**64. Uniform doubles take the top 53 bits of a
mixed word, giving values in [0, 1).
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15  # 2**64 / golden ratio, the SplitMix64 increment
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

# draw slots for the solver's keyed streams
DRAW_INIT = 0  # initial particle positions
DRAW_R1 = 1    # personal-best attraction factor
DRAW_R2 = 2    # global-best attraction / perturbation factor


def mix64(z: int) -> int:
    """SplitMix64 output function: a bijective avalanche mix of one word."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


def absorb(h: int, word: int) -> int:
    """Fold one key word into a running hash: mix64(h + GOLDEN + word)."""
    return mix64((h + GOLDEN + word) & MASK64)


def stream_key(seed: int, *words: int) -> int:
    """Derive a 64-bit stream key by absorbing words in order into the seed."""
    h = seed & MASK64
    for w in words:
        h = absorb(h, w)
    return h


def derive_seed(seed: int, index: int) -> int:
    """Per-instance sub-seed for batch generation: stream_key(seed, index)."""
    return stream_key(seed, index)


_U53 = np.uint64(11)


def _mix64_vec(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


def keyed_uniforms(seed: int, ordinal: int, iteration: int, draw: int, n: int) -> np.ndarray:
    """Return n doubles in [0, 1) for a (seed, agent, iteration, draw) stream.

    Output k is mix64(h + GOLDEN*(k+1)) scaled to [0, 1), where
    h = stream_key(seed, ordinal, iteration, draw). Stateless: the same key
    tuple always yields the same vector, regardless of evaluation order.
    """
    h = stream_key(seed, ordinal, iteration, draw)
    ks = np.arange(1, n + 1, dtype=np.uint64)
    z = np.uint64(h) + np.uint64(GOLDEN) * ks
    bits = _mix64_vec(z)
    return (bits >> _U53).astype(np.float64) * 2.0**-53


class AgentStreams:
    """The keyed uniform streams owned by one agent (one variable)."""

    def __init__(self, seed: int, ordinal: int):
        self.seed = seed & MASK64
        self.ordinal = ordinal

    def initial_uniforms(self, n: int) -> np.ndarray:
        return keyed_uniforms(self.seed, self.ordinal, 0, DRAW_INIT, n)

    def update_uniforms(self, iteration: int, n: int) -> tuple[np.ndarray, np.ndarray]:
        """(r1, r2) vectors for the velocity updates of one iteration."""
        r1 = keyed_uniforms(self.seed, self.ordinal, iteration, DRAW_R1, n)
        r2 = keyed_uniforms(self.seed, self.ordinal, iteration, DRAW_R2, n)
        return r1, r2


class SplitMix64:
    """Sequential SplitMix64 stream (state += GOLDEN; output mix64(state))."""

    def __init__(self, seed: int):
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + GOLDEN) & MASK64
        return mix64(self._state)

    def random(self) -> float:
        """Uniform double in [0, 1): top 53 bits of the next word."""
        return (self.next_u64() >> 11) * 2.0**-53

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.random()

    def below(self, n: int) -> int:
        """Uniform integer in [0, n): next_u64() % n (bias < n / 2**64)."""
        if n <= 0:
            raise ValueError("below() needs n >= 1")
        return self.next_u64() % n
