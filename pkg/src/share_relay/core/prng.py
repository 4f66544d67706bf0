"""Bit-exact 64-bit PRNG stream shared by every stochastic component.

All arithmetic is modulo 2^64. The generator is the SplitMix64 construction:
the state advances by a fixed odd gamma and each output is the state passed
through the ``mix64`` finalizer. Share strings consume whole words, low bit
first; unused high bits of a string's last word are discarded.
"""
import logging
from typing import Protocol

import numpy as np

from share_relay.types import ShareString

logger = logging.getLogger(__name__)

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_MIX_C1 = 0xBF58476D1CE4E5B9
_MIX_C2 = 0x94D049BB133111EB
_UNIT = 2.0**-53


def mix64(u: int) -> int:
    """64-bit finalizer: three xor-shift rounds around two multiplies."""
    u &= MASK64
    u = ((u ^ (u >> 30)) * _MIX_C1) & MASK64
    u = ((u ^ (u >> 27)) * _MIX_C2) & MASK64
    return u ^ (u >> 31)


def derive_seed(seed: int, index: int) -> int:
    """Per-trial seed ``mix64(seed + index)``, independent of scheduling."""
    return mix64((seed + index) & MASK64)


def words_for(ell: int) -> int:
    """Number of 64-bit words consumed by an ``ell``-bit draw."""
    return -(-ell // 64)


class BitSource(Protocol):
    """Anything that can hand out fresh random share strings."""

    def draw(self, ell: int) -> ShareString: ...


class SplitMix64:
    """Seeded PRNG stream."""

    def __init__(self, seed: int = 0):
        self._state = seed & MASK64
        self.words_drawn = 0

    def next_word(self) -> int:
        self._state = (self._state + GOLDEN_GAMMA) & MASK64
        self.words_drawn += 1
        return mix64(self._state)

    def draw_bits(self, ell: int) -> int:
        value = 0
        for w in range(words_for(ell)):
            value |= self.next_word() << (64 * w)
        return value & ((1 << ell) - 1)

    def draw(self, ell: int) -> ShareString:
        return ShareString(self.draw_bits(ell), ell)

    def uniform(self) -> float:
        """Uniform float in [0, 1) from the top 53 bits of one word."""
        return (self.next_word() >> 11) * _UNIT

    def below(self, bound: int) -> int:
        """Integer in [0, bound) by reduction of one word (bias < bound / 2^64)."""
        return self.next_word() % bound


# ---------------------------------------------------------------------------
# numpy forms, bit-identical to the scalar ones above
# ---------------------------------------------------------------------------

_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)


def mix64_array(u: np.ndarray) -> np.ndarray:
    """Vectorised ``mix64`` over a uint64 array."""
    u = np.array(u, dtype=np.uint64, copy=True)
    u ^= u >> _S30
    u *= np.uint64(_MIX_C1)
    u ^= u >> _S27
    u *= np.uint64(_MIX_C2)
    u ^= u >> _S31
    return u


def derive_seeds(seed: int, start: int, count: int) -> np.ndarray:
    """``derive_seed(seed, k)`` for k in ``[start, start + count)``."""
    idx = np.arange(count, dtype=np.uint64) + np.uint64((seed + start) & MASK64)
    return mix64_array(idx)


def stream_words(seeds: np.ndarray, count: int) -> np.ndarray:
    """First ``count`` stream words for each seed, shape ``(len(seeds), count)``."""
    seeds = np.asarray(seeds, dtype=np.uint64)
    offsets = np.array(
        [((k + 1) * GOLDEN_GAMMA) & MASK64 for k in range(count)], dtype=np.uint64
    )
    return mix64_array(seeds[:, None] + offsets[None, :])


def words_to_uniform(words: np.ndarray) -> np.ndarray:
    """Vectorised ``SplitMix64.uniform`` applied to already-drawn words."""
    return (words >> _S11).astype(np.float64) * _UNIT
