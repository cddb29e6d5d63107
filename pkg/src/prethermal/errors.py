"""Exception types shared across the package."""


class ConfigError(ValueError):
    """A scenario configuration is malformed or out of domain."""


class NumericalError(RuntimeError):
    """A computed object violates its invariants beyond tolerance."""
