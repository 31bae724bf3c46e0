class HarnessError(Exception):
    """Base for everything this package raises on purpose."""


class IntegrityError(HarnessError):
    """A dataset directory is missing, incomplete, or malformed."""


class ConfigError(HarnessError):
    """A training configuration value is out of range or inconsistent."""


class DivergenceError(HarnessError):
    """Training produced a non-finite loss."""


class CheckpointMismatch(HarnessError):
    """A checkpoint does not fit the requested model."""
