"""Exception types raised across the package."""


class MetrologyError(Exception):
    """Base class for all package errors."""


class DomainError(MetrologyError, ValueError):
    """A parameter lies outside its allowed range."""


class NotHermitianError(MetrologyError, ValueError):
    pass


class NotPSDError(MetrologyError, ValueError):
    pass


class ConvergenceError(MetrologyError, ArithmeticError):
    """The Jacobi eigensolver ran out of sweeps."""


class DimensionError(MetrologyError, ValueError):
    """Unsupported or mismatched matrix dimensions."""


class InvalidStateError(MetrologyError, ValueError):
    """Matrix fails the density-matrix (or POVM) invariants."""


class CannotConditionError(MetrologyError, ValueError):
    """Projection outcome has (numerically) zero probability."""


class DivergentInformationError(MetrologyError, ArithmeticError):
    """A zero-probability outcome has a non-zero phase derivative."""


class NotIdentifiableError(MetrologyError, ValueError):
    """The requested parameter cannot be estimated from the given counts."""


class FlatLikelihoodError(MetrologyError, ValueError):
    """The likelihood does not depend on the phase (eta * V == 0)."""


class InfeasibleCountsError(MetrologyError, ValueError):
    """Observed counts have zero probability over the whole phase domain."""


class NoBoundError(MetrologyError, ValueError):
    """Fisher information is not positive, so no Cramer-Rao bound exists."""


class IncompleteDataError(MetrologyError, ValueError):
    """Tomography counts are missing a measurement setting."""
