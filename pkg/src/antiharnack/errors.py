"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument is outside the mathematical domain of the operation."""


class RejectionError(ValueError):
    """Inputs fail an integrability or hypothesis check.

    Raised *before* any quadrature is attempted, e.g. when the declared
    decay of a field makes the requested integral divergent, or when an
    operation requires antisymmetry / smoothness the field does not have.
    """


class QuadratureError(RuntimeError):
    """The quadrature engine could not meet the requested tolerance.

    Carries the best available estimate and its error bound so callers can
    decide whether to accept a degraded result.
    """

    def __init__(self, message, value=None, error_bound=None):
        super().__init__(message)
        self.value = value
        self.error_bound = error_bound
