"""Exception types shared across the package."""


class GevreyLabError(Exception):
    """Base class for all package errors."""


class ConfigurationError(GevreyLabError):
    """Invalid grid, box, or solver configuration."""


class DomainError(GevreyLabError):
    """Argument outside the mathematical domain of an operation."""


class NumericRangeError(GevreyLabError):
    """Overflow or loss of range, carrying the offending index when known."""

    def __init__(self, message, offender=None):
        super().__init__(message)
        self.offender = offender


class GaugeError(GevreyLabError):
    """Field violates a gauge condition (e.g. nonzero mean vorticity)."""


class InstabilityError(GevreyLabError):
    """NaN or blowup detected during time stepping."""

    def __init__(self, message, step_index=None):
        super().__init__(message)
        self.step_index = step_index


class PrecisionError(GevreyLabError):
    """Quadrature or iteration failed to reach the requested accuracy."""


class BranchCutError(GevreyLabError):
    """Complex argument on (or too close to) a branch cut."""


class ConstraintError(GevreyLabError):
    """A smallness constraint on the candidate time is violated."""
