"""Dense matrix carrier types with canonical storage.

``SymMatrix`` stores a full square array whose (i, j) and (j, i) entries are
bitwise equal; every producer of symmetric data goes through
:func:`symmetrize` so the invariant survives roundoff.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def symmetrize(a: np.ndarray) -> np.ndarray:
    """Return (A + A^T)/2.

    Floating-point addition is commutative, so the result is exactly
    symmetric entrywise, not just up to roundoff.
    """
    a = np.asarray(a, dtype=float)
    return (a + a.T) / 2.0


class SymMatrix:
    """Real symmetric matrix in canonical (exactly symmetric) storage."""

    __slots__ = ("a",)

    def __init__(self, a: np.ndarray, *, _trusted: bool = False):
        a = np.asarray(a, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        if a.shape[0] < 1:
            raise ValueError("matrix dimension must be at least 1")
        self.a = a if _trusted else symmetrize(a)

    @classmethod
    def from_array(cls, a: np.ndarray) -> "SymMatrix":
        return cls(a)

    @classmethod
    def identity(cls, n: int) -> "SymMatrix":
        return cls(np.eye(n), _trusted=True)

    @property
    def n(self) -> int:
        return self.a.shape[0]

    def __repr__(self) -> str:
        return f"SymMatrix(n={self.n})"


class TriangularFactor:
    """Triangular matrix, stored full with the dead triangle zeroed.

    ``orientation`` is ``"upper"`` or ``"lower"``.  Cholesky produces an
    upper factor with strictly positive diagonal.
    """

    __slots__ = ("r", "orientation")

    def __init__(self, r: np.ndarray, orientation: str = "upper"):
        r = np.asarray(r, dtype=float)
        if r.ndim != 2 or r.shape[0] != r.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {r.shape}")
        if orientation not in ("upper", "lower"):
            raise ValueError(f"bad orientation {orientation!r}")
        if orientation == "upper":
            r = np.triu(r)
        else:
            r = np.tril(r)
        self.r = r
        self.orientation = orientation

    @property
    def n(self) -> int:
        return self.r.shape[0]

    @property
    def diagonal(self) -> np.ndarray:
        return np.diag(self.r)

    def transpose(self) -> "TriangularFactor":
        flipped = "lower" if self.orientation == "upper" else "upper"
        return TriangularFactor(self.r.T, flipped)

    def __repr__(self) -> str:
        return f"TriangularFactor(n={self.n}, {self.orientation})"


@dataclass
class EigenDecomposition:
    """Orthogonal Q and ascending eigenvalues of a symmetric matrix."""

    q: np.ndarray
    lam: np.ndarray

    @property
    def n(self) -> int:
        return self.lam.shape[0]


def as_sym(x) -> SymMatrix:
    return x if isinstance(x, SymMatrix) else SymMatrix(np.asarray(x, dtype=float))
