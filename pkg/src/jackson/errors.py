"""Exception hierarchy shared by every module."""


class JacksonError(Exception):
    """Base class for all library errors."""


class DomainError(JacksonError, ValueError):
    """An argument lies outside the domain of an operation."""


class EvaluationError(JacksonError, ArithmeticError):
    """A function produced a non-finite sample."""


class InvalidCoefficients(JacksonError, ValueError):
    """Coefficient array is not conjugate symmetric."""


class InvalidInput(JacksonError, ValueError):
    """A checker precondition on its input function failed."""


class InvalidConstruction(JacksonError, ValueError):
    """A constructed test function is not a member of its claimed class."""


class ExchangeFailure(JacksonError, RuntimeError):
    """The minimax exchange produced a degenerate reference."""


class ToleranceUnachievable(JacksonError, ValueError):
    """Requested tolerance is below what double precision can guarantee."""


class InternalError(JacksonError, RuntimeError):
    """An internal consistency check failed."""
