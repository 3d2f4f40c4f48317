"""Exception types shared across the package."""


class EllTowerError(Exception):
    """Base class for all errors raised by this package."""


class CapExceeded(EllTowerError):
    """A closure or enumeration grew past the configured cap."""


class NotInvertible(EllTowerError):
    """A matrix expected to be invertible mod ell^n is not."""


class LevelOutOfRange(EllTowerError):
    """A congruence level was outside [0, n]."""


class NotASubgroup(EllTowerError):
    """An element set is not a subgroup of the expected parent."""


class NotNormal(EllTowerError):
    """A subgroup expected to be normal is not."""


class NonIntegralGenus(EllTowerError):
    """Riemann-Hurwitz bookkeeping produced a non-integral genus."""


class NonIntegralDifferent(EllTowerError):
    """An intermediate different exponent came out non-integral."""


class WildMismatch(EllTowerError):
    """Wild inertia parts failed to match across tower levels."""


class AssumptionViolated(EllTowerError):
    """A core-stability / reduction assumption check failed."""


class IdentityViolation(EllTowerError):
    """Two independent computations of the same exact quantity disagree.

    This always signals an implementation bug, never bad input.
    """


class Unclassifiable(EllTowerError):
    """A subgroup matched no class of the projective-line taxonomy."""


class OutsideDomain(EllTowerError):
    """Input outside the convergence domain of a truncated series."""


class BadCharacter(EllTowerError):
    """A character failed multiplicativity on a sampled relation."""


class ParseError(EllTowerError):
    """Input text is not syntactically valid.  Carries line/column."""

    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column


class ValidationError(EllTowerError):
    """Input parsed but violates the schema.  Carries a field path."""

    def __init__(self, message, path=""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path
