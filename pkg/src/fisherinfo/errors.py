"""Exception types shared across the package."""


class HypothesisViolationError(ValueError):
    """A bound was requested outside the regime where it holds.

    The message names the violated inequality so callers can report it.
    """


class QuadratureError(RuntimeError):
    """The integrand evaluated to a non-finite value at a quadrature node."""


class InfeasibleTargetError(RuntimeError):
    """No sample size within the search range meets the requested target.

    Attributes
    ----------
    best_precision, best_confidence : float
        The best (precision, confidence) pair achieved at the upper end of
        the search range, for diagnostics.
    """

    def __init__(self, message, best_precision=None, best_confidence=None):
        super().__init__(message)
        self.best_precision = best_precision
        self.best_confidence = best_confidence


class UnsupportedOracleError(ValueError):
    """Closed-form ground truth is not available for this input law."""
