"""Exception vocabulary shared across the package."""


class FixlabError(Exception):
    """Base class for every error raised by this package."""


class DomainError(FixlabError, ValueError):
    """An argument lies outside its mathematical domain."""


class SpaceMismatchError(DomainError):
    """Points handed to an operation do not belong to the given space/grid."""


class UnsupportedOrderError(FixlabError, ValueError):
    """The order relation does not support the requested comparison."""


class UnsupportedError(FixlabError, ValueError):
    """A check cannot be performed for the given inputs (e.g. unknown fixed-point set)."""


class PreconditionError(FixlabError, ValueError):
    """A documented precondition of an operation was violated."""


class EstimationError(FixlabError, RuntimeError):
    """A sampling-based estimator produced no admissible samples."""


class IterationError(FixlabError, RuntimeError):
    """Base class for failures inside an iteration loop; carries the step index."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class DomainEscapeError(IterationError):
    """The mapping produced a point outside its declared domain."""

    def __init__(self, message, step=None, point=None):
        super().__init__(message, step=step)
        self.point = point


class NumericError(IterationError):
    """A non-finite value (overflow/NaN) appeared during iteration."""


class NonConvergenceError(IterationError):
    """The iteration hit its step budget before reaching tolerance."""

    def __init__(self, message, step=None, residual=None):
        super().__init__(message, step=step)
        self.residual = residual


class InvariantError(IterationError):
    """A runtime invariant the method relies on was violated."""
