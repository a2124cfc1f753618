"""Exception types shared across the toolkit."""


class RegretForgeError(Exception):
    """Base class for all toolkit errors."""


class NumericalBreakdown(RegretForgeError):
    """The LP kernel lost numerical stability beyond recovery."""


class InfeasibleSolution(RegretForgeError):
    """A candidate solution violates the instance constraints."""


class NonIntegralData(RegretForgeError):
    """An operation requiring integral data received fractional values."""


class TooLarge(RegretForgeError):
    """An exhaustive-enumeration guard was exceeded."""


class UnboundedRelaxation(RegretForgeError):
    """A node LP relaxation was unbounded, so the MILP is ill-posed."""


class TimeLimitExceeded(RegretForgeError):
    """A solve was cut off by its time budget.

    ``partial`` carries whatever incumbent information was available when
    the budget expired (shape depends on the raising call site).
    """

    def __init__(self, message="time budget exhausted", partial=None):
        super().__init__(message)
        self.partial = partial


class EmptyFeasibleRegion(RegretForgeError):
    """A problem specification admits no feasible solution."""


class ParseError(RegretForgeError):
    """An instance file could not be parsed."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
