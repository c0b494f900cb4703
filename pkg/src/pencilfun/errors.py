"""Exception and warning types shared across the package."""

from __future__ import annotations


class PencilFunError(Exception):
    """Base class for all errors raised by this package."""


class NotPositiveDefinite(PencilFunError):
    """A matrix required to be positive definite is not (numerically).

    ``pivot`` is the 1-based index of the failing Cholesky pivot, or 0 when
    the failure was detected from eigenvalues instead.
    """

    def __init__(self, message: str, pivot: int = 0):
        super().__init__(message)
        self.pivot = pivot


class SingularFactor(PencilFunError):
    """A triangular factor has a zero diagonal entry."""


class NoConvergence(PencilFunError):
    """An iterative kernel exceeded its iteration cap."""


class DomainError(PencilFunError):
    """A scalar-function argument lies outside the function's domain.

    ``offenders`` collects every out-of-domain value encountered.
    """

    def __init__(self, message: str, offenders=()):
        super().__init__(message)
        self.offenders = tuple(offenders)


class UnknownFunction(PencilFunError):
    """Requested scalar function name is not in the registry."""


class BadParameter(PencilFunError):
    """A scalar-function or generator parameter is out of range."""


class SizeCapExceeded(PencilFunError):
    """A dense Kronecker-form computation was requested above the size cap."""


class ParseError(PencilFunError):
    """Malformed matrix file.  ``line`` is the 1-based offending line."""

    def __init__(self, message: str, line: int = 0):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


class ShapeError(PencilFunError):
    """Matrix data has the wrong shape or violates declared symmetry."""


class IllConditionedEigenvectors(UserWarning):
    """Eigenvector basis of a diagonalization is numerically singular."""
