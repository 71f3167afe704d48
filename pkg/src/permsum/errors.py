"""Exception hierarchy shared by every module and mapped to CLI exit codes."""


class PermsumError(Exception):
    """Base class for all library errors."""


class DomainError(PermsumError, ValueError):
    """Input outside the mathematical domain of an operation (exit code 1)."""


class UnsupportedError(DomainError):
    """Valid input that falls outside the implemented scope."""


class ResourceError(PermsumError):
    """A size cap on an exponential-time routine was exceeded (exit code 2)."""


class NumericError(PermsumError, ArithmeticError):
    """Iteration failed to converge or a consistency check failed."""
