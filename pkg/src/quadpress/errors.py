"""Exception types shared across the package."""


class QuadpressError(Exception):
    """Base class for all package errors."""


class ParameterError(QuadpressError):
    """Input outside its documented range."""


class DegenerateDerivative(QuadpressError):
    """An orbit derivative factor fell below the underflow threshold."""


class BudgetExceeded(QuadpressError):
    """A tree/enumeration budget was exhausted before convergence."""


class NotFound(QuadpressError):
    """A requested object (periodic point, window, ...) does not exist."""


class NonMarkov(QuadpressError):
    """Boundary orbit failed to close, partition is not Markov."""

    def __init__(self, message, endpoint=None):
        super().__init__(message)
        self.endpoint = endpoint


class NonHyperbolic(QuadpressError):
    """Model failed the expansion certificate."""


class NoSignChange(QuadpressError):
    """Bisection input has no sign change on the given range."""


class SlopesOverlap(QuadpressError):
    """Crossing cannot be kink-certified: slope brackets overlap."""


class NoRoot(QuadpressError):
    """Pressure stays positive on the whole dimension search range."""


class SuperstableParameter(QuadpressError):
    """The critical point is periodic; the requested check is skipped."""


class AmbiguousFixedPoint(QuadpressError):
    """A fixed point is parabolic to tolerance; count is unreliable."""
