"""Exception hierarchy shared by all entbound modules."""


class EntboundError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(EntboundError, ValueError):
    """Matrix shapes are incompatible with the requested operation."""


class NotHermitianError(EntboundError, ValueError):
    pass


class ConvergenceError(EntboundError, RuntimeError):
    """The eigensolver ran out of sweeps before meeting its tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ValidationError(EntboundError, ValueError):
    """A matrix failed one of the density-matrix checks."""


class TraceError(ValidationError):
    pass


class NotPositiveError(ValidationError):
    pass


class StateDimensionError(ValidationError, DimensionError):
    pass


class NumericalConsistencyError(EntboundError, ArithmeticError):
    """A derived quantity fell outside its mathematically allowed range."""


class DomainError(EntboundError, ValueError):
    """Arguments outside the domain where a bound is defined."""


class QdmParseError(EntboundError, ValueError):
    pass


class PathMatchingError(EntboundError, RuntimeError):
    """Eigenvalue paths could not be told apart even after step refinement."""
