"""Exception hierarchy for fusedpath."""


class FusedPathError(Exception):
    """Base class for every error raised by this package."""


class InvalidPWL(FusedPathError, ValueError):
    """Breakpoints or slopes violate the convex piecewise-linear representation."""


class NotCoercive(InvalidPWL):
    """First slope is not negative or last slope is not positive."""


class InvalidEps(FusedPathError, ValueError):
    """Linearization step is not positive."""


class UnassignedNode(FusedPathError, RuntimeError):
    """A node is still on the source side after the last breakpoint."""


class OverlappingInsert(FusedPathError, RuntimeError):
    """An interval inserted into an interval map intersects a stored one."""


class UncoveredLambda(FusedPathError, RuntimeError):
    """Some lambda in a segment has no optimal value after the scan."""


class TooLarge(FusedPathError, ValueError):
    """Instance exceeds the size limits of exhaustive enumeration."""


class ParseError(FusedPathError, ValueError):
    """Malformed instance or path document.

    Parameters
    ----------
    message : str
        What went wrong.
    location : str, optional
        JSON-pointer-like location of the offending element.
    """

    def __init__(self, message, location=None):
        self.location = location
        if location:
            message = f"{location}: {message}"
        super().__init__(message)
