"""End-to-end key establishment: relay, verify, retry on mismatch."""
import logging
from dataclasses import dataclass, field
from typing import Optional

from share_relay.core.prng import derive_seed
from share_relay.core.relay import TamperPlan, run_relay
from share_relay.core.topology import CompromisePattern, NetworkSpec
from share_relay.core.verification import (
    Layout,
    VerificationOutcome,
    run_verification,
    split_key,
)
from share_relay.errors import LayoutError
from share_relay.types import HashSpec, ShareString

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class KeyEstablishment:
    """Result of :func:`establish_key`. ``key`` is the verified s3, or None."""

    key: Optional[ShareString]
    attempts: int
    outcomes: list[VerificationOutcome] = field(default_factory=list)

    @property
    def succeeded(self) -> bool:
        return self.key is not None


def establish_key(
    spec: NetworkSpec,
    pattern: CompromisePattern,
    seed: int,
    layout: Layout,
    hash_spec: HashSpec,
    tamper: Optional[TamperPlan] = None,
    max_attempts: int = 8,
) -> KeyEstablishment:
    """Repeat relay plus verification until both parties accept.

    Attempt a uses run seed ``derive_seed(seed, 2a)`` and nonce seed
    ``derive_seed(seed, 2a + 1)``. Rejected keys are discarded.
    """
    ell_1a, ell_1b, ell_2, ell_3 = layout
    if ell_1a + ell_1b + ell_2 + ell_3 != spec.ell:
        raise LayoutError(f"layout {layout} does not sum to ell={spec.ell}")
    if max_attempts < 1:
        raise ValueError(f"max_attempts must be >= 1, got {max_attempts}")

    outcomes: list[VerificationOutcome] = []
    for attempt in range(max_attempts):
        run = run_relay(spec, pattern, derive_seed(seed, 2 * attempt), tamper)
        alice = split_key(run.s, ell_1a, ell_1b, ell_2)
        bob = split_key(run.s_prime, ell_1a, ell_1b, ell_2)
        outcome = run_verification(alice, bob, hash_spec, derive_seed(seed, 2 * attempt + 1))
        outcomes.append(outcome)
        if outcome.bob_accepts and outcome.alice_accepts:
            logger.info(f"Key established after {attempt + 1} attempt(s)")
            return KeyEstablishment(alice.s3, attempt + 1, outcomes)
        logger.info(f"Attempt {attempt + 1} rejected, discarding keys")

    logger.warning(f"No key after {max_attempts} attempts")
    return KeyEstablishment(None, max_attempts, outcomes)
