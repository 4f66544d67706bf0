"""Type definitions shared across share-relay."""
from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable, Literal

from share_relay.errors import DimensionError


@dataclass(frozen=True)
class ShareString:
    """Fixed-length bitstring.

    Bit ``b`` of the string is bit ``b`` of ``value``; "front" of the string
    means low bit indices, so ``a.concat(b)`` places ``a`` in the low bits.
    """

    value: int
    length: int

    def __post_init__(self) -> None:
        if self.length < 0:
            raise DimensionError(f"ShareString length must be >= 0, got {self.length}")
        if self.value < 0 or self.value >> self.length:
            raise DimensionError(
                f"value 0x{self.value:x} does not fit in {self.length} bits"
            )

    @classmethod
    def zeros(cls, length: int) -> "ShareString":
        return cls(0, length)

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "ShareString":
        """Build from an iterable of 0/1 values, first element is bit 0."""
        value = 0
        length = 0
        for bit in bits:
            if bit not in (0, 1):
                raise ValueError(f"bits must be 0 or 1, got {bit!r}")
            value |= bit << length
            length += 1
        return cls(value, length)

    @classmethod
    def from_hex(cls, text: str, length: int) -> "ShareString":
        return cls(int(text, 16), length)

    def __len__(self) -> int:
        return self.length

    def __xor__(self, other: "ShareString") -> "ShareString":
        if not isinstance(other, ShareString):
            return NotImplemented
        if other.length != self.length:
            raise DimensionError(
                f"cannot XOR strings of length {self.length} and {other.length}"
            )
        return ShareString(self.value ^ other.value, self.length)

    def concat(self, other: "ShareString") -> "ShareString":
        """Return ``self || other``."""
        return ShareString(self.value | (other.value << self.length), self.length + other.length)

    def slice(self, start: int, stop: int) -> "ShareString":
        """Bits ``[start, stop)`` as a new string."""
        if not 0 <= start <= stop <= self.length:
            raise DimensionError(f"slice [{start}, {stop}) outside length {self.length}")
        width = stop - start
        return ShareString((self.value >> start) & ((1 << width) - 1), width)

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple((self.value >> b) & 1 for b in range(self.length))

    @property
    def is_zero(self) -> bool:
        return self.value == 0

    def to_hex(self) -> str:
        """Hex encoding zero-padded to ceil(length / 4) digits."""
        digits = max(1, -(-self.length // 4))
        return f"{self.value:0{digits}x}"


class Endpoint(Enum):
    """The two honest parties at either end of the chain. Never relay nodes."""

    ALICE = "alice"
    BOB = "bob"


@dataclass(frozen=True, order=True)
class NodeAddress:
    """Relay node ``v_{i,j}``: ``i`` is the index within city ``j`` (both 1-based)."""

    i: int
    j: int

    def __post_init__(self) -> None:
        if self.i < 1 or self.j < 1:
            raise DimensionError(f"node indices are 1-based, got (i={self.i}, j={self.j})")


HashFamily = Literal["default-nonlinear", "linear-test"]


@dataclass(frozen=True)
class HashSpec:
    """Selects a hash family and its output width ``output_bits`` (d)."""

    family: HashFamily = "default-nonlinear"
    output_bits: int = 64
    seed: int = 0

    def __post_init__(self) -> None:
        if self.output_bits < 1:
            raise ValueError(f"output_bits must be >= 1, got {self.output_bits}")

    def with_bits(self, output_bits: int) -> "HashSpec":
        return replace(self, output_bits=output_bits)


@dataclass(frozen=True)
class Bandwidth:
    """Bits transmitted during one relay run."""

    intercity_bits: int
    intracity_bits: int

    def to_dict(self) -> dict:
        return {
            "intercity_bits": self.intercity_bits,
            "intracity_bits": self.intracity_bits,
        }


AdversaryModel = Literal["bernoulli", "fixed-fraction"]
