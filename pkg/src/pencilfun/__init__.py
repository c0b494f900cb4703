"""Matrix functions of symmetric definite pencils: kernels, algorithms,
conditioning, an extended-precision reference, and an experiment harness."""

from .errors import (
    BadParameter,
    DomainError,
    IllConditionedEigenvectors,
    NoConvergence,
    NotPositiveDefinite,
    ParseError,
    PencilFunError,
    ShapeError,
    SingularFactor,
    SizeCapExceeded,
    UnknownFunction,
)
from .flops import FlopCounter
from .types import EigenDecomposition, SymMatrix, TriangularFactor, symmetrize
from .precision import UNIT_ROUNDOFF

__all__ = [
    "BadParameter",
    "DomainError",
    "EigenDecomposition",
    "FlopCounter",
    "IllConditionedEigenvectors",
    "NoConvergence",
    "NotPositiveDefinite",
    "ParseError",
    "PencilFunError",
    "ShapeError",
    "SingularFactor",
    "SizeCapExceeded",
    "SymMatrix",
    "TriangularFactor",
    "UNIT_ROUNDOFF",
    "UnknownFunction",
    "symmetrize",
]
