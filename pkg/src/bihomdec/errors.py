"""Exception types shared across the package."""


class BihomError(Exception):
    """Base class for errors raised by this package."""


class ShapeMismatchError(BihomError):
    """Dimensions of a point, form or curve do not match the declared shape."""


class NotInSpanError(BihomError):
    """A vector claimed to lie in a span does not."""


class DoesNotSplitError(BihomError):
    """Exact mode needs a squarefree kernel form with rational roots and none exists.

    Carries the partial analysis (border rank, rank, kernel form) so callers
    can fall back to the numeric backend.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class ExhaustionError(BihomError):
    """A seeded search ran out of candidates before reaching the requested count."""

    def __init__(self, message, found=()):
        super().__init__(message)
        self.found = list(found)


class PreconditionError(BihomError):
    """Operation called outside its stated precondition."""


class NoSpecialLineError(BihomError):
    """No alpha- or beta-line slice reaches its defect threshold.

    Inputs are outside the two-witness theorem regime, or in the
    one-factor conic case (run the conic recognizer)."""


class SplitMismatchError(BihomError):
    """The two witnesses do not share the off-line part E (contract violation)."""


class InfeasibleInstanceError(BihomError):
    """Requested generator parameters violate the theorem hypotheses or the
    rational-planting constraints."""


class NonConvergenceError(BihomError):
    """Numeric root finding failed to reach the requested residual tolerance."""
