"""Exception hierarchy shared by every module."""


class StreamSymError(Exception):
    """Base class for all errors raised by streamsym."""


class DomainError(StreamSymError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class SingularPointError(DomainError):
    """Evaluation was requested on (or too close to) a singular point.

    ``points`` holds the offending coordinates, as an ``(n, k)`` array when
    available.
    """

    def __init__(self, message, points=None):
        super().__init__(message)
        self.points = points


class StencilPlacementError(SingularPointError):
    """A finite-difference footprint reaches into an excluded region."""


class ConstructionError(StreamSymError, ValueError):
    """Invalid parameters for building a solution or group element."""


class PathError(StreamSymError):
    """Pressure integration cannot reach part of the unmasked grid."""


class NotApplicableError(StreamSymError):
    """The requested check does not apply to this kind of solution."""
