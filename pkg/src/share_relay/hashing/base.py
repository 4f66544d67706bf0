"""Base hash interface."""
from abc import ABC, abstractmethod

from share_relay.types import ShareString


class BaseHash(ABC):
    """Abstract base class for bit-exact hash families."""

    family: str

    @abstractmethod
    def digest(self, message: ShareString, output_bits: int) -> ShareString:
        """Hash ``message`` to exactly ``output_bits`` bits.

        Args:
            message: Input bitstring of any length, including zero
            output_bits: Digest width d

        Returns:
            ShareString of length ``output_bits``
        """
        pass
