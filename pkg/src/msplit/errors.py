"""Exception hierarchy for msplit."""


class MsplitError(Exception):
    """Base class for all msplit errors."""


class DimensionError(MsplitError, ValueError):
    """Operands have incompatible order or dimension."""


class NegativeRadicandError(MsplitError, ArithmeticError):
    """An even root of a negative component was requested.

    Inside the fixed-point iteration this means the iterate left the
    nonnegative cone.
    """

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class NormalizationError(MsplitError, ValueError):
    """The tensor does not have (or cannot be scaled to) a unit diagonal."""


class SingularEMatrixError(MsplitError, ArithmeticError):
    """The matrix part of a splitting is singular."""


class VariantDomainError(MsplitError, ValueError):
    """A splitting family was requested outside the parameters it is defined for."""


class ReconstructionError(MsplitError, AssertionError):
    """An assembled splitting does not reproduce the tensor it splits."""


class NotNonnegativeError(MsplitError, ValueError):
    """A nonnegative tensor was required."""


class ConfigError(MsplitError, ValueError):
    """Invalid benchmark or example configuration."""


class FormatError(MsplitError, ValueError):
    """Malformed tensor or vector file."""


class DuplicateEntryError(FormatError):
    """A sparse (COO) file lists the same index tuple twice."""
