"""Exception types raised across the package."""


class TailcensError(Exception):
    """Base class for all package errors."""


class DomainError(TailcensError, ValueError):
    """An argument lies outside the domain of the operation."""


class ParameterError(TailcensError, ValueError):
    """A model or tuning parameter is invalid."""


class CSVParseError(TailcensError, ValueError):
    """A data file could not be parsed; ``line`` is 1-based."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class AllCensoredInTail(TailcensError, ArithmeticError):
    """Every one of the top ``k`` observations is censored, so ``phat(k) = 0``."""


class DegenerateKM(TailcensError, ArithmeticError):
    """The Kaplan-Meier survival at the threshold is zero."""


class DegenerateSample(TailcensError, ValueError):
    """The sample does not carry enough distinct information."""


class InsufficientTrace(TailcensError, ValueError):
    """Fewer defined trace entries than threshold selection needs."""


class SigmaPUndefined(TailcensError, ArithmeticError):
    """The untruncated asymptotic variance only exists for ``p > 1/2``."""


class QuadratureError(TailcensError, ArithmeticError):
    """Numerical integration did not reach the requested tolerance."""
