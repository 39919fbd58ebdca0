"""Exception hierarchy shared by every module."""


class RamaError(Exception):
    """Base class for all package errors."""


class ArgumentError(RamaError, ValueError):
    """An argument violates an operation's precondition."""


class ConfigurationError(RamaError, ValueError):
    """Invalid sieve sizing or resource configuration."""


class RangeError(ArgumentError, IndexError):
    """A value lies outside the range covered by the sieve tables."""


class ResourceError(RamaError, RuntimeError):
    """An enumeration would exceed the configured budget."""


class NumericalDriftError(RamaError, ArithmeticError):
    """Floating-point evaluation drifted too far from an integer."""


class FitError(RamaError, ValueError):
    """Least-squares design matrix is rank deficient."""


class VerificationError(RamaError, AssertionError):
    """An exact identity check produced a nonzero discrepancy."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report or {}
