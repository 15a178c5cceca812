"""Shared exception types, mapped onto CLI exit codes by vko.cli."""


class VkoError(Exception):
    """Base class for all library errors."""


class ParameterError(VkoError):
    """Invalid argument for a builder or an operation."""


class ConstructionError(VkoError):
    """A construction precondition holds but the build cannot proceed."""


class GenericityError(VkoError):
    """A map failed an exact general-position predicate; reseed and retry."""


class SubdivisionConflictError(GenericityError):
    """Two subdivision points collide or hit a face; reseed and retry."""


class VerificationError(VkoError):
    """A certificate failed its exact re-verification."""


class BudgetExceededError(VkoError):
    """A budgeted stage ran out of its cell or time allowance."""

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial
