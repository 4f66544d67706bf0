"""Core relay, verification and analysis functionality."""
