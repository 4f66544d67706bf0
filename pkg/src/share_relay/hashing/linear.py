"""GF(2)-linear matrix hash.

Deliberately linear: H(a ^ b) == H(a) ^ H(b), so an attacker who picks the
tamper string e3 knows the matching e1b = H(e3) without knowing s3.
"""
from functools import lru_cache

from share_relay.core.prng import MASK64, mix64, words_for
from share_relay.hashing.base import BaseHash
from share_relay.types import ShareString

_ROW_STRIDE = 0x100000001


class LinearTestHash(BaseHash):
    """Digest bit r is the parity of (row r AND message)."""

    family = "linear-test"

    def __init__(self, seed: int = 0):
        self.seed = seed

    def row(self, r: int, length: int) -> int:
        return _matrix_row(self.seed, r, length)

    def digest(self, message: ShareString, output_bits: int) -> ShareString:
        out = 0
        for r in range(output_bits):
            out |= ((self.row(r, message.length) & message.value).bit_count() & 1) << r
        return ShareString(out, output_bits)


@lru_cache(maxsize=4096)
def _matrix_row(seed: int, r: int, length: int) -> int:
    row = 0
    for c in range(words_for(length)):
        row |= mix64((seed + _ROW_STRIDE * r + c) & MASK64) << (64 * c)
    return row & ((1 << length) - 1)
