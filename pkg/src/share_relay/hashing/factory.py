"""Factory for selecting a hash family."""
import logging
from typing import Type

from share_relay.hashing.base import BaseHash
from share_relay.hashing.linear import LinearTestHash
from share_relay.hashing.nonlinear import MixSpongeHash
from share_relay.types import HashSpec

logger = logging.getLogger(__name__)


class HashFactory:
    """Maps a :class:`HashSpec` family name to a hash implementation."""

    def __init__(self):
        self._families: dict[str, Type[BaseHash]] = {
            MixSpongeHash.family: MixSpongeHash,
            LinearTestHash.family: LinearTestHash,
        }

    @property
    def families(self) -> list[str]:
        return sorted(self._families)

    def get_hash(self, spec: HashSpec) -> BaseHash:
        """Instantiate the family named by ``spec``.

        Raises:
            ValueError: If the family is unknown
        """
        try:
            hash_class = self._families[spec.family]
        except KeyError:
            raise ValueError(
                f"No hash family named {spec.family!r}. "
                f"Supported families: {', '.join(self.families)}"
            ) from None

        if hash_class is LinearTestHash:
            return LinearTestHash(seed=spec.seed)
        return hash_class()
