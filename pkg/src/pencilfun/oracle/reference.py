"""Reference evaluation of A f(A^{-1}B) in double-double precision.

Follows the Cholesky-congruence-Jacobi composition: with A = L L^T, form
S3 = L^{-1} B L^{-T}, diagonalise it, apply f to the eigenvalues, and map
back with S5 = L S4 L^T.  Everything runs in double-double, so the result
sits far below the error floor of any working-precision algorithm on the
same input.
"""

from __future__ import annotations

import numpy as np

from ..errors import DomainError
from ..types import SymMatrix
from .ddlinalg import (
    DDMatrix,
    dd_cholesky_lower,
    dd_jacobi_eig,
    dd_matmul,
    dd_scale_columns,
    dd_solve_lower,
    dd_symmetrize,
)


def reference_phi(A: SymMatrix, B: SymMatrix, spec) -> DDMatrix:
    """Double-double reference value of A f(A^{-1}B) for SPD A, symmetric B."""
    add = DDMatrix.from_float(A.a, symmetric=True)
    bdd = DDMatrix.from_float(B.a, symmetric=True)
    lfac = dd_cholesky_lower(add)
    y = dd_solve_lower(lfac, bdd)
    s3 = dd_symmetrize(DDMatrix(*_transpose_pair(dd_solve_lower(lfac, y.transpose()))))
    q, lam = dd_jacobi_eig(s3)
    lo_dom, hi_dom = spec.domain
    offenders = [v.hi for v in lam if not (lo_dom < v.hi < hi_dom)]
    if offenders:
        raise DomainError(
            f"{len(offenders)} eigenvalue(s) outside the domain of {spec.name}",
            offenders=offenders,
        )
    flam = [spec.dd_eval(v) for v in lam]
    w = dd_scale_columns(q, flam)
    s4 = dd_matmul(w, q.transpose())
    s5 = dd_matmul(dd_matmul(lfac, s4), DDMatrix(lfac.hi.T.copy(), lfac.lo.T.copy()))
    return dd_symmetrize(s5)


def _transpose_pair(x: DDMatrix):
    return x.hi.T.copy(), x.lo.T.copy()


def relative_error_vs_reference(computed: np.ndarray, ref: DDMatrix) -> float:
    """Frobenius relative forward error of a working-precision result."""
    diff = (computed - ref.hi) - ref.lo
    num = float(np.sqrt(np.sum(diff * diff)))
    den = float(np.sqrt(np.sum((ref.hi + ref.lo) ** 2)))
    if den == 0.0:
        return num
    return num / den
