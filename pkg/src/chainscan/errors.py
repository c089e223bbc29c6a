"""Exception types shared across the package."""


class ParseError(ValueError):
    """A grid file could not be parsed; the message names the offending location."""


class CapacityError(ValueError):
    """An exact method was asked to exceed its guarded problem size."""


class EstimationError(RuntimeError):
    """A Monte Carlo estimator produced no usable trials."""


class ConvergenceError(RuntimeError):
    """An iterative numeric method failed to converge."""
