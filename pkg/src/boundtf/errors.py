"""Exception types shared across the package.

The CLI maps these onto process exit codes, so library code should raise
these rather than bare ValueError/RuntimeError for user-facing failures.
"""


class BoundtfError(Exception):
    """Base class for all package errors."""


class DimensionError(BoundtfError, ValueError):
    """Inputs have incompatible or insufficient dimensions."""


class OrderingError(BoundtfError, ValueError):
    """Grid locations are not strictly increasing."""


class DomainError(BoundtfError, ValueError):
    """A parameter lies outside the domain of an operation."""


class InputFormatError(BoundtfError, ValueError):
    """An input file contains non-numeric or non-finite values."""


class ConditioningError(BoundtfError, RuntimeError):
    """A positive-definite factorization failed.

    ``pivot`` is the 1-based index of the leading minor that failed,
    or -1 when the backend did not report one.
    """

    def __init__(self, message, pivot=-1):
        super().__init__(message)
        self.pivot = pivot
