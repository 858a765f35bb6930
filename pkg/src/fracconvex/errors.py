"""Exception hierarchy shared by the numerical modules."""


class FracConvexError(Exception):
    """Base class for every error raised by this package."""


class DomainError(FracConvexError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class RangeError(FracConvexError, OverflowError):
    """A result is not representable as a finite double."""


class EvaluationError(FracConvexError, ValueError):
    """A function produced a non-finite value or hit a domain violation.

    ``location`` holds the abscissa at which evaluation failed, when known.
    """

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class ConvergenceError(FracConvexError, ArithmeticError):
    """Adaptive quadrature ran out of subdivisions before meeting tolerance."""

    def __init__(self, message, value, error_estimate, subdivisions_used):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate
        self.subdivisions_used = subdivisions_used


class ExprSyntaxError(FracConvexError, ValueError):
    """Raised by the expression parser. ``offset`` is a UTF-8 byte offset."""

    def __init__(self, message, offset, expected=()):
        self.offset = offset
        self.expected = tuple(sorted(expected))
        detail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{message} at offset {offset}{detail}")


class UnsupportedOperationError(FracConvexError, ValueError):
    """Symbolic differentiation met a node it cannot differentiate."""


class UsageError(FracConvexError, ValueError):
    """Parameters fall outside the validity region of a claim, or are malformed."""
