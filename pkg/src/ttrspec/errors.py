"""Exception types shared across the package."""


class NumericsError(Exception):
    """A numerical procedure could not produce a trustworthy result."""


class CoefficientPoleError(NumericsError):
    """A recurrence coefficient is singular at the requested point."""


class NonConvergenceError(NumericsError):
    """Iterative refinement stalled; carries the last two approximants."""

    def __init__(self, message, last=None, previous=None):
        super().__init__(message)
        self.last = last
        self.previous = previous
