"""Exception hierarchy shared by all modules."""


class CompactRcsError(Exception):
    """Base class for every error raised by this package."""


class DomainError(CompactRcsError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class FormatError(CompactRcsError, ValueError):
    """Malformed or mismatched data (grids, lengths, file contents)."""


class DegenerateReferenceError(CompactRcsError):
    """The calibration sphere sweep has a zero-magnitude sample."""


class FitError(CompactRcsError):
    """Base class for distribution-fitting failures."""


class DegenerateFitError(FitError):
    """Sample set has no spread, so the MLE does not exist."""


class InsufficientDataError(FitError):
    """Too few samples for the requested model."""


class FitFailureError(FitError):
    """The optimizer did not converge.

    ``best`` holds the best parameter iterate reached and ``best_value`` its
    objective value.
    """

    def __init__(self, message, best=None, best_value=None):
        super().__init__(message)
        self.best = best
        self.best_value = best_value


class NoModelError(FitError):
    """Every candidate model failed to fit."""


class StageError(CompactRcsError):
    """A pipeline stage failed; ``stage`` names it and ``__cause__`` holds the reason."""

    def __init__(self, stage, cause):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause
