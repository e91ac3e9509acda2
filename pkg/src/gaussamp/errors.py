"""Exception types shared across the package."""


class GaussAmpError(Exception):
    """Base class for all package errors."""


class ValidationError(GaussAmpError, ValueError):
    """Invalid channel or state parameters.

    ``field`` names the offending parameter so front ends can point at the
    flag or config key that caused it.
    """

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class NonPositiveGamma0(ValidationError):
    pass


class NegativeNoise(ValidationError):
    pass


class NonFinite(ValidationError):
    pass


class MalformedCM(ValidationError):
    """Correlation matrix blocks violate hermiticity or symmetry."""


class SingularSystem(GaussAmpError, ArithmeticError):
    """The stationary equations have no unique solution (resonance)."""


class RegimeViolation(GaussAmpError):
    """A criterion was applied outside the regime it was derived for."""


class NoSignChange(GaussAmpError):
    """A bisection bracket holds a single phase."""
