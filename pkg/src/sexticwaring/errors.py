"""Exception hierarchy.

Precondition failures and numerical failures are kept apart so the CLI can
map them to distinct exit codes.
"""


class SexticError(Exception):
    """Base class for every error raised by this package."""


class PreconditionError(SexticError, ValueError):
    """An input violates the documented precondition of an operation."""


class NumericalError(SexticError, ArithmeticError):
    """A numerical routine failed to reach its accuracy target."""


class DegreeMismatch(PreconditionError):
    pass


class WrongDegree(PreconditionError):
    pass


class ZeroPoint(PreconditionError):
    pass


class ScalarFieldMismatch(PreconditionError, TypeError):
    pass


class NotSquare(PreconditionError):
    pass


class WrongCardinality(PreconditionError):
    pass


class PositiveDimensional(PreconditionError):
    pass


class KernelWrongSize(PreconditionError):
    pass


class WrongHVector(PreconditionError):
    pass


class DegenerateConfiguration(PreconditionError):
    pass


class DegenerateCubicSystem(PreconditionError):
    pass


class NonReducedIntersection(PreconditionError):
    pass


class NoSolution(PreconditionError):
    pass


class IllConditioned(NumericalError):
    pass


class ResidualTooLarge(NumericalError):
    pass


class SyzygyRankUnexpected(NumericalError):
    pass


class FilterMiscount(NumericalError):
    pass


class InconsistentQuotient(NumericalError):
    pass


class VerificationFailed(NumericalError):
    """A computed result failed one of its own postcondition checks."""
