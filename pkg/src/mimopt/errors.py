"""Exception hierarchy shared across the package."""


class SolverError(Exception):
    """Base class for every error raised by this package."""


class InputError(SolverError):
    """Malformed model, instance, or argument."""


class UnboundedError(SolverError):
    """An LP relaxation or polytope is unbounded where boundedness is required."""


class CapacityError(SolverError):
    """A configured size guard was exceeded (enumeration cap, oracle guard, ...)."""


class ConvexityError(InputError):
    """A value table fails the nondecreasing-first-differences check.

    ``index`` is the first position k where values[k+1]-values[k] decreases.
    """

    def __init__(self, message: str, index: int):
        super().__init__(message)
        self.index = index
