"""Exception and warning types shared across the package."""


class PiezoHarvError(Exception):
    """Base class for all package errors."""


class InvalidInputError(PiezoHarvError, ValueError):
    """An argument violates a precondition (bad geometry, empty stack...)."""


class DomainError(InvalidInputError):
    """A dimensionless argument falls outside its admissible interval."""


class OverdampedError(DomainError):
    """Damping ratio is at or above critical damping."""


class ConfigError(PiezoHarvError):
    """A config or data file fails schema validation.

    Attributes:
        path: JSON-pointer-like location of the offending entry, if known.
    """

    def __init__(self, message: str, path: str = ""):
        super().__init__(message if not path else f"{path}: {message}")
        self.path = path


class NumericError(PiezoHarvError, ArithmeticError):
    """A numerical routine failed (no bracket, singular matrix...)."""


class ConvergenceError(NumericError):
    """Adaptive routine hit its iteration budget.

    Attributes:
        best_estimate: The estimate available when the budget ran out.
        error_estimate: Its estimated absolute error.
    """

    def __init__(self, message: str, best_estimate: float, error_estimate: float):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.error_estimate = error_estimate


class TraceError(PiezoHarvError):
    """A measurement trace cannot be analysed as given."""


class ResampleRequiredError(TraceError):
    """Trace sampling is not uniform."""


class MissingPressureError(TraceError):
    """No pressure is available for a model-vs-measurement comparison."""


class PhysicsWarning(UserWarning):
    """Result is well defined but physically degenerate (zero coupling, passive layer)."""
