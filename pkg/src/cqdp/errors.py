"""Exception hierarchy shared by every module."""


class CQDPError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInput(CQDPError, ValueError):
    """An argument is outside its documented domain."""


class NotPositiveDefinite(CQDPError, ArithmeticError):
    """A matrix that must be strictly positive definite is not (above tolerance)."""


class Infeasible(CQDPError):
    """No finite privacy parameter exists, e.g. the states have different supports."""


class ResourceLimit(CQDPError):
    """The requested problem is too large for the dense solver."""


class NotDPAtEps(CQDPError):
    """A tuple handed to the certifier is not CQ eps-DP at the requested eps."""

    def __init__(self, message, worst_pair=None, worst_eigenvalue=None):
        super().__init__(message)
        self.worst_pair = worst_pair
        self.worst_eigenvalue = worst_eigenvalue


class ParseError(CQDPError, ValueError):
    """A tuple document does not match the schema."""

    def __init__(self, message, location=None):
        if location is not None:
            message = f"{message} (at {location})"
        super().__init__(message)
        self.location = location


class ValidationError(CQDPError, ValueError):
    """Parsed values violate an invariant of the target type."""

    def __init__(self, invariant, detail=""):
        super().__init__(f"{invariant}: {detail}" if detail else invariant)
        self.invariant = invariant
        self.detail = detail
        self.location = None
