"""Exception hierarchy.

Every error names the contract it enforces; the CLI maps these onto the
stable exit codes documented in cli.py.
"""


class IndefSqrtError(Exception):
    """Base class for all errors raised by this package."""


class NotHermitian(IndefSqrtError):
    """A matrix required to be Hermitian failed the symmetry check."""


class GramianNotHermitian(IndefSqrtError):
    """The inner-product Gramian H is not Hermitian at tolerance."""


class GramianSingular(IndefSqrtError):
    """The inner-product Gramian H is numerically singular."""


class NotHNonnegative(IndefSqrtError):
    """The pair (B, H) is not H-nonnegative."""


class IllConditioned(IndefSqrtError):
    """Spectral structure cannot be resolved at the requested tolerance."""


class NonZeroEigenvalue(IndefSqrtError):
    """An operation restricted to nilpotent data met a nonzero eigenvalue."""


class InvalidWeyr(IndefSqrtError):
    """A nullity sequence is not a valid Weyr characteristic."""


class UnsupportedEntry(IndefSqrtError):
    """Segre entry larger than 2; outside the H-nonnegative class."""


class PairingMismatch(IndefSqrtError):
    """A pairing does not cover the given Segre characteristic."""


class ConstraintViolation(IndefSqrtError):
    """Template parameters violate a nonzero or modulus constraint."""


class ModeViolation(IndefSqrtError):
    """The requested structured mode forbids the given pair or plan."""


class ExistenceViolation(IndefSqrtError):
    """No square root exists in the requested mode."""


class NoHnnRoot(IndefSqrtError):
    """The matrix has no H-nonnegative square root."""


class DimensionMismatch(IndefSqrtError):
    """Operands have incompatible shapes."""


class ClusterAmbiguity(IndefSqrtError):
    """Eigenvalue clusters cannot be separated consistently."""


class TooLarge(IndefSqrtError):
    """Input exceeds the supported brute-force search size."""
