"""Exception hierarchy for the monoshift package."""


class MonoshiftError(Exception):
    """Base class for all package errors."""


class InvalidLetterError(MonoshiftError):
    """A word uses a letter outside the alphabet {1, ..., d}."""


class DegenerateGeneratorError(MonoshiftError):
    """A generator of length < 2 was supplied.

    Single-letter generators are rejected rather than stripped: the caller
    should remove the letter from the alphabet instead.
    """


class BoundRequiredError(MonoshiftError):
    """The ideal has infinite type and no exploration bound was supplied."""


class UnboundedSearchError(MonoshiftError):
    """A search over an infinite-type ideal cannot be certified complete."""

    def __init__(self, message: str, bound: int | None = None):
        super().__init__(message)
        self.bound = bound


class ForbiddenWordError(MonoshiftError):
    """An operation expected an allowable word but received a forbidden one."""


class TruncationTooShallowError(MonoshiftError):
    """The Fock truncation has no interior at the requested word length."""


class NoConvergenceError(MonoshiftError):
    """Power iteration hit its cap; ``estimate`` carries the best value seen."""

    def __init__(self, message: str, estimate: float):
        super().__init__(message)
        self.estimate = estimate


class NotClassConstantError(MonoshiftError):
    """Diagonal values are not constant on predecessor classes."""


class PreconditionViolationError(MonoshiftError):
    """A documented precondition failed; ``offender`` names the culprit."""

    def __init__(self, message: str, offender=None):
        super().__init__(message)
        self.offender = offender


class InfiniteTypeError(MonoshiftError):
    """The operation is only defined for ideals of finite type."""


class UnsupportedError(MonoshiftError):
    """Input lies outside the decidable fragment (e.g. quotient space not
    stabilized within the exploration bound)."""


class InternalInvariantError(MonoshiftError):
    """A theorem-backed cross-check failed.  Always a bug, never swallowed."""
