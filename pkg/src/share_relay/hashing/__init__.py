"""Hash families used by key verification."""
from share_relay.hashing.factory import HashFactory

__all__ = ["HashFactory"]
