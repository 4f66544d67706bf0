"""Exception hierarchy for share-relay."""


class RelayError(Exception):
    """Base class for all share-relay errors."""


class DimensionError(RelayError, ValueError):
    """Network dimensions are invalid or an object does not match its spec."""


class ProbabilityError(RelayError, ValueError):
    """A probability argument lies outside its domain."""


class TamperPlanError(RelayError, ValueError):
    """A tamper plan names a nonexistent edge or carries a wrong-length mask."""


class LayoutError(RelayError, ValueError):
    """A key partition is invalid or two partitions disagree on layout."""


class OracleLimitError(RelayError, ValueError):
    """The exact oracle was asked for a state space it cannot enumerate."""


class ConfigError(RelayError):
    """Experiment configuration could not be loaded or validated."""
