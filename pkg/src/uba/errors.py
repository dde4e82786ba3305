"""Exception types raised across the package."""


class UbaError(Exception):
    """Base class for all package errors."""


class InvalidGeometryError(UbaError, ValueError):
    pass


class DegenerateSpaceError(UbaError, ValueError):
    pass


class OrderingError(UbaError, ValueError):
    """Success probabilities are not non-increasing in misalignment order."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class ModelViolationError(UbaError, ValueError):
    """Mean-reward vector is not strictly unimodal.

    ``indices`` holds the (0-based) arm indices around the violation.
    """

    def __init__(self, message, indices=()):
        super().__init__(message)
        self.indices = tuple(indices)


class DomainError(UbaError, ValueError):
    pass


class PolicyStateError(UbaError, RuntimeError):
    """Policy used out of protocol (after termination, mismatched update, t=0 check)."""


class ConfigError(UbaError, ValueError):
    pass


class ExperimentError(UbaError, RuntimeError):
    pass
