"""Exception types raised by the estimation and simulation routines."""


class EstimationError(Exception):
    """Base class for numerical-estimation failures."""


class NoSolutionError(EstimationError):
    """The estimating equation has no root (degenerate data)."""


class ConvergenceError(EstimationError):
    """The root finder exhausted its iteration budget."""

    def __init__(self, message, iterations=None, residual=None):
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual


class InsufficientDataError(EstimationError):
    """A method's data precondition is violated (e.g. MLC with d < 2)."""


class SingularityError(EstimationError):
    """A matrix or denominator required to be invertible is numerically singular."""


class CorrectionOvershootError(EstimationError):
    """Bias correction drove an estimate out of its parameter space."""
