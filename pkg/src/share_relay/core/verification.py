"""Key verification: Alice and Bob confirm s == s' without revealing s3.

The key is split front-to-back as ``s1a || s1b || s2 || s3``. Alice sends
``(r || H[s3]) ^ s1`` with a fresh nonce r, Bob checks the hash slot against
his own ``s3'`` and answers ``H[r'] ^ s2'``, and Alice checks that answer.
Any wire modification is equivalent to a tamper string
``e = (e1a, e1b, e2, e3)`` with ``s' = s ^ e``.
"""
import logging
from dataclasses import dataclass
from typing import Optional

from share_relay.core.prng import SplitMix64
from share_relay.errors import LayoutError
from share_relay.hashing import HashFactory
from share_relay.types import HashSpec, ShareString

logger = logging.getLogger(__name__)

Layout = tuple[int, int, int, int]

_factory = HashFactory()


@dataclass(frozen=True)
class KeyPartition:
    """A key split into the nonce pad, hash pad, reply pad and payload."""

    s1a: ShareString
    s1b: ShareString
    s2: ShareString
    s3: ShareString

    @property
    def layout(self) -> Layout:
        return (self.s1a.length, self.s1b.length, self.s2.length, self.s3.length)

    @property
    def ell_1a(self) -> int:
        return self.s1a.length

    @property
    def ell_1b(self) -> int:
        return self.s1b.length

    @property
    def ell_2(self) -> int:
        return self.s2.length

    @property
    def ell_3(self) -> int:
        return self.s3.length

    @property
    def s1(self) -> ShareString:
        return self.s1a.concat(self.s1b)

    def key(self) -> ShareString:
        """The original key, ``s1a || s1b || s2 || s3``."""
        return self.s1a.concat(self.s1b).concat(self.s2).concat(self.s3)

    def apply(self, tamper: "TamperString") -> "KeyPartition":
        """The partition Bob ends up with when Eve's net effect is ``tamper``."""
        if tamper.layout != self.layout:
            raise LayoutError(f"tamper layout {tamper.layout} != key layout {self.layout}")
        return KeyPartition(
            self.s1a ^ tamper.e1a,
            self.s1b ^ tamper.e1b,
            self.s2 ^ tamper.e2,
            self.s3 ^ tamper.e3,
        )


@dataclass(frozen=True)
class TamperString:
    """Eve's modifications, laid out like the key partition."""

    e1a: ShareString
    e1b: ShareString
    e2: ShareString
    e3: ShareString

    @classmethod
    def zero(cls, layout: Layout) -> "TamperString":
        return cls(*(ShareString.zeros(width) for width in layout))

    @classmethod
    def from_mask(cls, mask: ShareString, layout: Layout) -> "TamperString":
        part = split_key(mask, layout[0], layout[1], layout[2])
        return cls(part.s1a, part.s1b, part.s2, part.s3)

    @property
    def layout(self) -> Layout:
        return (self.e1a.length, self.e1b.length, self.e2.length, self.e3.length)

    @property
    def is_zero(self) -> bool:
        return all(e.is_zero for e in (self.e1a, self.e1b, self.e2, self.e3))


@dataclass(frozen=True)
class VerificationOutcome:
    """Acceptance decisions plus the two wire messages (reply absent if Bob aborted)."""

    bob_accepts: bool
    alice_accepts: bool
    first_message: ShareString
    reply: Optional[ShareString] = None

    def to_dict(self) -> dict:
        return {
            "bob_accepts": self.bob_accepts,
            "alice_accepts": self.alice_accepts,
            "first_message": self.first_message.to_hex(),
            "reply": self.reply.to_hex() if self.reply is not None else None,
        }


def split_key(s: ShareString, ell_1a: int, ell_1b: int, ell_2: int) -> KeyPartition:
    """Partition ``s`` front-to-back; s3 takes the remaining bits."""
    if min(ell_1a, ell_1b, ell_2) < 0:
        raise LayoutError(f"negative partition length in ({ell_1a}, {ell_1b}, {ell_2})")
    ell_3 = s.length - ell_1a - ell_1b - ell_2
    if ell_3 <= 0:
        raise LayoutError(
            f"partition ({ell_1a}, {ell_1b}, {ell_2}) leaves {ell_3} bits for s3 "
            f"of a {s.length}-bit key"
        )
    cuts = [0, ell_1a, ell_1a + ell_1b, ell_1a + ell_1b + ell_2, s.length]
    return KeyPartition(*(s.slice(a, b) for a, b in zip(cuts, cuts[1:])))


def compute_hash(spec: HashSpec, message: ShareString) -> ShareString:
    """``spec.output_bits``-bit digest of ``message`` under ``spec.family``."""
    return _factory.get_hash(spec).digest(message, spec.output_bits)


def run_verification(
    alice: KeyPartition,
    bob: KeyPartition,
    spec: HashSpec,
    seed: int,
) -> VerificationOutcome:
    """Run the three-message check; ``spec`` supplies family and seed, widths follow the layout."""
    if alice.layout != bob.layout:
        raise LayoutError(f"Alice's layout {alice.layout} != Bob's layout {bob.layout}")
    if alice.ell_1b < 1 or alice.ell_2 < 1:
        raise LayoutError(f"hash slots need >= 1 bit, layout is {alice.layout}")
    key_hash = spec.with_bits(alice.ell_1b)
    nonce_hash = spec.with_bits(alice.ell_2)

    # Alice -> Bob: (r || H[s3]) ^ s1
    nonce = SplitMix64(seed).draw(alice.ell_1a)
    first_message = nonce.concat(compute_hash(key_hash, alice.s3)) ^ alice.s1

    # Bob: decrypt with s1', compare the hash slot with H[s3']
    opened = first_message ^ bob.s1
    nonce_seen = opened.slice(0, bob.ell_1a)
    hash_seen = opened.slice(bob.ell_1a, opened.length)
    if hash_seen != compute_hash(key_hash, bob.s3):
        logger.debug("Bob aborts: key hash mismatch")
        return VerificationOutcome(False, False, first_message, None)

    # Bob -> Alice: H[r'] ^ s2'
    reply = compute_hash(nonce_hash, nonce_seen) ^ bob.s2

    alice_accepts = (reply ^ alice.s2) == compute_hash(nonce_hash, nonce)
    if not alice_accepts:
        logger.debug("Alice aborts: nonce hash mismatch")
    return VerificationOutcome(True, alice_accepts, first_message, reply)


def attack_forge_bob(alice_s3: ShareString, e3: ShareString, spec: HashSpec) -> ShareString:
    """The e1b that makes Bob accept ``s3 ^ e3``: ``H[s3] ^ H[s3 ^ e3]``.

    Computed with full knowledge of s3; for a linear hash it equals H[e3].
    """
    if e3.length != alice_s3.length:
        raise LayoutError(f"e3 has {e3.length} bits, s3 has {alice_s3.length}")
    return compute_hash(spec, alice_s3) ^ compute_hash(spec, alice_s3 ^ e3)


def attack_impersonate_bob(
    guess: ShareString, alice: KeyPartition, nonce_hash: ShareString
) -> bool:
    """Whether a forged reply ``guess`` passes Alice's check (guess == s2 ^ H[r])."""
    if guess.length != alice.ell_2:
        raise LayoutError(f"guess has {guess.length} bits, s2 has {alice.ell_2}")
    return guess == alice.s2 ^ nonce_hash
