"""Exception hierarchy shared by all modules."""


class GapBoundError(Exception):
    """Base class for every error raised by this package."""


class DomainError(GapBoundError, ValueError):
    """Argument outside the domain of a comparison function."""


class EndpointSingular(GapBoundError, ValueError):
    """The endpoint normalisation of the Jacobi profile divides by zero."""


class AdmissibilityError(GapBoundError, ValueError):
    """Diameter incompatible with the positive curvature bounds."""


class InvalidClass(GapBoundError, ValueError):
    pass


class MonotonicityError(GapBoundError, ValueError):
    """Trial function violates g' > 0 on [0, D)."""


class NonFiniteRatio(GapBoundError, ArithmeticError):
    pass


class SingularDrift(GapBoundError, ArithmeticError):
    """The log-weight of the radial operator is not finite on the mesh."""


class NonMonotoneEigenfunction(GapBoundError, UserWarning):
    """Issued as a warning: the discrete principal eigenfunction is not increasing."""


class ConfigError(GapBoundError, ValueError):
    pass


class ConsistencyFailure(GapBoundError, AssertionError):
    """A catalog model violates a bound it must satisfy."""
