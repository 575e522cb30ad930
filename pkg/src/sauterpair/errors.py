"""Error taxonomy shared across the package.

ConfigError maps to CLI exit code 2, NumericsError to exit code 3.
"""


class ConfigError(ValueError):
    """Invalid user-supplied configuration (bad grid size, malformed axis, ...)."""


class NumericsError(RuntimeError):
    """A numerical procedure failed its own guards (norm drift, bad bracket, ...)."""
