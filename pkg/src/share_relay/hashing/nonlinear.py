"""Default nonlinear hash: a mix64 sponge over 64-bit words."""
from share_relay.core.prng import GOLDEN_GAMMA, MASK64, mix64, words_for
from share_relay.hashing.base import BaseHash
from share_relay.types import ShareString


class MixSpongeHash(BaseHash):
    """Absorbs the padded message word by word, squeezes with a counter.

    Padding appends a single 1 bit then zeros up to a multiple of 64, so
    messages of different lengths never share a padded form. The absorb
    state is seeded with the message length.
    """

    family = "default-nonlinear"

    def digest(self, message: ShareString, output_bits: int) -> ShareString:
        padded = message.value | (1 << message.length)
        state = mix64(GOLDEN_GAMMA ^ message.length)
        for w in range(words_for(message.length + 1)):
            state = mix64(state ^ ((padded >> (64 * w)) & MASK64))

        out = 0
        for k in range(words_for(output_bits)):
            out |= mix64((state + (k + 1) * GOLDEN_GAMMA) & MASK64) << (64 * k)
        return ShareString(out & ((1 << output_bits) - 1), output_bits)
