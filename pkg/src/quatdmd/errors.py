"""Exception types raised by the quaternion algebra and decomposition layers."""


class QuatDmdError(Exception):
    """Base class for all package-specific errors."""


class ShapeMismatchError(QuatDmdError, ValueError):
    """Operands have incompatible shapes."""


class MalformedAdjointError(QuatDmdError, ValueError):
    """A complex matrix does not have the paired block structure of an adjoint."""


class NonPrincipalLogError(QuatDmdError, ValueError):
    """Logarithm of a negative real quaternion: the rotation axis is undefined."""


class EigenPairingError(QuatDmdError, ArithmeticError):
    """Adjoint eigenvalues could not be matched into conjugate pairs."""


class NonDiagonalizableError(QuatDmdError, ArithmeticError):
    """Eigenvector matrix is numerically singular.

    Attributes
    ----------
    condition : float
        Estimated condition number of the eigenvector matrix (inf when the
        smallest singular value underflows to zero).
    """

    def __init__(self, message, condition=float("inf")):
        super().__init__(message)
        self.condition = condition


class RankError(QuatDmdError, ValueError):
    """Requested truncation rank is out of range for the data."""


class InsufficientDataError(QuatDmdError, ValueError):
    """Too few snapshots to fit a model."""


class LogSingularityError(QuatDmdError, ArithmeticError):
    """An eigenvalue is too close to zero for a continuous-time exponent."""


class SequenceLoadError(QuatDmdError, OSError):
    """Frame sequence could not be ingested (missing, unreadable, or mixed sizes)."""
