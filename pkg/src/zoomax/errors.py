"""Exception types shared across the package."""


class ZoomaxError(Exception):
    """Base class for all package errors."""


class DomainError(ZoomaxError):
    """A point lies outside the domain a map is defined on."""


class InvalidInputError(ZoomaxError):
    """Arguments violate a documented precondition."""


class CapabilityError(ZoomaxError):
    """The requested operation is not supported for this input kind."""


class BudgetError(ZoomaxError):
    """A node, depth or period budget would be exceeded."""


class SingularityError(ZoomaxError):
    """An orbit hit a point where the derivative degenerates."""

    def __init__(self, message, index=None, point=None):
        super().__init__(message)
        self.index = index
        self.point = point


class AmbiguityError(ZoomaxError):
    """A branch itinerary could not be resolved near a piece boundary."""


class ConvergenceError(ZoomaxError):
    """An iteration failed to reach its tolerance within the step budget."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = list(residuals) if residuals is not None else []


class DivergenceError(ZoomaxError):
    """The infimum construction drifts down linearly (centering too large)."""

    def __init__(self, message, depth_minima=None):
        super().__init__(message)
        self.depth_minima = list(depth_minima) if depth_minima is not None else []


class HypothesisError(ZoomaxError):
    """A mathematical hypothesis required by an operation fails on the input."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class PrecisionError(ZoomaxError):
    """Requested precision cannot be certified at the current horizon."""
