"""Exception types shared across the package."""


class NilformsError(Exception):
    """Base class for every library error."""


# -- scalar / linear algebra --------------------------------------------------

class FieldMismatch(NilformsError):
    """Operands belong to different fields."""


class DivisionByZero(NilformsError, ZeroDivisionError):
    """Inversion of the zero scalar."""


class DimensionMismatch(NilformsError):
    """Shapes are incompatible, or a computed dimension violates its formula."""


class NoSolution(NilformsError):
    """A linear system is inconsistent (the query target is absent)."""


# -- bilinear forms -----------------------------------------------------------

class KindMismatch(NilformsError):
    """Gram matrix does not match the declared symmetric/alternating kind."""


class CharTwoUnsupported(NilformsError):
    """Form-bearing operations reject characteristic 2."""


class DegenerateForm(NilformsError):
    """A non-degenerate form was required."""


class NonIsotropicVector(NilformsError):
    """The supplied vector x has b(x, x) != 0."""


class ZeroVector(NilformsError):
    """The supplied vector is zero."""


# -- endomorphisms / operator spaces ------------------------------------------

class NotNilpotent(NilformsError):
    """An element failed the u^n = 0 test.  Carries a witness when available."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class PreconditionViolated(NilformsError):
    """An operation's stated hypothesis does not hold for the input."""


class FlagNotSingular(NilformsError):
    """Top flag subspace is not totally singular for the form."""


class FlagNotMaximal(NilformsError):
    """Flag length differs from the Witt index."""


# -- classification -----------------------------------------------------------

class CommonKernelEmpty(NilformsError):
    """No non-zero vector is annihilated by the whole space."""


class NoIsotropicCommonKernelVector(NilformsError):
    """The common kernel holds no non-zero isotropic vector."""


class VerificationFailed(NilformsError):
    """The certified final comparison against the canonical space failed."""


# -- witnesses / oracle / extension -------------------------------------------

class BadParameters(NilformsError):
    """Witness request parameters are out of range."""


class CertificateFailed(NilformsError):
    """A constructed witness violates one of its asserted properties."""


class BudgetExceeded(NilformsError):
    """Exhaustive mode was demanded but the enumeration exceeds the budget."""


class UnsupportedExtension(NilformsError):
    """Scalar extension target is not supported for the base field."""


class IncompleteSearchWarning(UserWarning):
    """A bounded search over an infinite field came back empty-handed."""
