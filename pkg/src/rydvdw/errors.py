"""Exception types shared across the package."""


class ConfigError(ValueError):
    """A run configuration failed validation (CLI exit code 2)."""


class NumericError(RuntimeError):
    """A numerical routine failed or did not converge (CLI exit code 1)."""
