"""Exception hierarchy shared by every spinpol module."""


class SpinpolError(Exception):
    """Base class for all library errors."""


class NumericalError(SpinpolError):
    """Raised when a numerical precondition or solver fails."""


class NotHermitian(NumericalError):
    pass


class NotPSD(NumericalError):
    pass


class ConvergenceFailure(NumericalError):
    pass


class DimensionMismatch(NumericalError):
    pass


class NonFiniteError(NumericalError):
    pass


class DomainError(NumericalError, ValueError):
    """Argument outside the domain of a closed-form relation."""


class SiteOutOfRange(SpinpolError, IndexError):
    pass


class DuplicateSite(SpinpolError, ValueError):
    pass


class ConfigError(SpinpolError, ValueError):
    """Invalid scenario or chain configuration; message names the field."""
