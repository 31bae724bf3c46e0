"""Exception types shared across the fdsl package."""


class FdslError(Exception):
    """Base class for all fdsl-specific errors."""


class DegenerateSystem(FdslError):
    """All maps of a system are rank-deficient; probabilities are undefined."""


class Diverged(FdslError):
    """An iterate left the divergence bound; the system is not contractive."""


class ExhaustedRetries(FdslError):
    """Too many consecutive degenerate draws while sampling a system."""


class SearchTimeout(FdslError):
    """Category search ran out of attempts before filling its quota.

    Carries the attempt budget and the number of acceptances so callers
    can report the observed acceptance rate.
    """

    def __init__(self, message: str, attempts: int = 0, accepted: int = 0):
        super().__init__(message)
        self.attempts = attempts
        self.accepted = accepted


class EmptyCloud(FdslError):
    """A point cloud with no points cannot be normalized."""


class InvalidCount(FdslError):
    """A requested instance or category count is not positive."""


class InvalidAxisValue(FdslError):
    """An exploration-grid value is outside its axis's documented domain."""


class IntegrityError(FdslError):
    """A dataset on disk is missing files or was generated from another config."""
