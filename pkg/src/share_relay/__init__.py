"""share-relay: secret-sharing relay simulator and security analysis toolkit."""

__version__ = "0.1.0"
