"""Exception types shared across the package."""


class RetroqError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(RetroqError, ValueError):
    """Operands have incompatible shapes or subsystem dimensions."""


class NotHermitian(RetroqError, ValueError):
    """A matrix required to be Hermitian failed the symmetry check."""


class NotPSD(RetroqError, ValueError):
    """A matrix required to be positive semidefinite has a negative eigenvalue."""


class ZeroOperator(RetroqError, ValueError):
    """An operator with empty support was passed where support is required."""


class SupportViolation(RetroqError, ValueError):
    """Evidence carries weight outside the support of the forward image."""


class InvalidPOVM(RetroqError, ValueError):
    """Effects are not PSD or do not resolve the identity."""


class EmptyEnsemble(RetroqError, ValueError):
    """A state ensemble with no members."""


class NotPure(RetroqError, ValueError):
    """An ensemble member required to be pure has rank above one."""


class UnsupportedEvidence(RetroqError, ValueError):
    """Classical evidence assigns weight to an outcome of prior probability zero."""


class ValidationError(RetroqError, ValueError):
    """A constructed object violates one of its declared invariants."""


class ParseError(RetroqError, ValueError):
    """Malformed serialized input."""


class CrossCheckError(RetroqError):
    """Two redundant internal computation routes disagreed (implementation bug)."""


class OracleDisagreement(RetroqError):
    """The brute-force equivalence oracle contradicted the signature criterion."""
