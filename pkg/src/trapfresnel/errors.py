"""Exception types raised by trapfresnel."""


class FresnelError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameterError(FresnelError, ValueError):
    """A configuration parameter (N, M, number of terms, ...) is out of range."""


class InvalidInputError(FresnelError, ValueError):
    """An evaluation argument is non-finite or outside the supported set."""


class DomainError(InvalidInputError):
    """An argument lies outside the region where a formula is valid."""


class SingularityError(DomainError):
    """A bound is evaluated exactly at its singular point."""


class PoleProximityError(DomainError):
    """A complex argument is too close to a pole of F_N."""

    def __init__(self, z, pole, distance):
        self.z = z
        self.pole = pole
        self.distance = distance
        super().__init__(
            f"z={z!r} lies within {distance:.3e} of the pole {pole!r}"
        )


class ConvergenceError(FresnelError, RuntimeError):
    """Adaptive quadrature did not reach its tolerance."""

    def __init__(self, message, estimate=None, error=None):
        self.estimate = estimate
        self.error = error
        super().__init__(message)


class ConstructionError(FresnelError, RuntimeError):
    """A cached model failed its self-check at construction."""
