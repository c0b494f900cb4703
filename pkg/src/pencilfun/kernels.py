"""Direct dense kernels: Cholesky, triangular solves and products, LU.

Loops are written row- or column-at-a-time so the inner work is vectorised;
flop tallies model the structure-exploiting reference algorithms (see
``flops``), so a product with a symmetric result is charged for one
triangle even though the vectorised execution fills the full square.
"""

from __future__ import annotations

import math

import numpy as np

from ._jit import njit
from .errors import NotPositiveDefinite, SingularFactor
from .flops import FlopCounter, counter_or_new
from .types import SymMatrix, TriangularFactor, symmetrize


@njit(cache=True)
def _chol_core(a):
    """Upper-triangle factorisation in place; returns failing pivot or 0."""
    n = a.shape[0]
    for k in range(n):
        piv = a[k, k]
        if not piv > 0.0:  # also catches NaN
            return k + 1
        rkk = math.sqrt(piv)
        a[k, k] = rkk
        inv = 1.0 / rkk
        for j in range(k + 1, n):
            a[k, j] *= inv
        for i in range(k + 1, n):
            aki = a[k, i]
            for j in range(i, n):
                a[i, j] -= aki * a[k, j]
    for i in range(1, n):
        for j in range(i):
            a[i, j] = 0.0
    return 0


def cholesky(A: SymMatrix, flops: FlopCounter | None = None) -> TriangularFactor:
    """Upper-triangular R with positive diagonal and R^T R = A.

    Raises :class:`NotPositiveDefinite` with the 1-based pivot index when a
    pivot is not strictly positive.
    """
    f = counter_or_new(flops)
    a = A.a.copy()
    n = A.n
    bad = _chol_core(a)
    if bad:
        raise NotPositiveDefinite(
            f"Cholesky pivot {bad} is not positive; matrix is not positive definite",
            pivot=bad,
        )
    f.count(adds=(n**3 - n) // 6, muls=(n**3 - n) // 6, divs=n * (n - 1) // 2, sqrts=n)
    f.charge_formula(n**3 / 3.0)
    return TriangularFactor(a, "upper")


def _effective_lower(T: TriangularFactor, transpose: bool) -> bool:
    lower = T.orientation == "lower"
    return lower != transpose


def _check_diag(T: TriangularFactor) -> np.ndarray:
    d = T.diagonal
    zero = np.where(d == 0.0)[0]
    if zero.size:
        raise SingularFactor(f"zero diagonal entry at index {zero[0] + 1}")
    return d


def tri_solve(
    T: TriangularFactor,
    B: np.ndarray,
    side: str = "left",
    transpose: bool = False,
    symmetric_out: bool = False,
    flops: FlopCounter | None = None,
) -> np.ndarray:
    """Solve T X = B (or the transposed / right-sided variants) by substitution.

    ``side="right"`` solves X T = B.  ``symmetric_out`` only affects flop
    accounting: the cost is charged as n^3/3 instead of n^3 per the
    symmetric-result substitution scheme.
    """
    f = counter_or_new(flops)
    if side == "right":
        # X T = B  <=>  T^T X^T = B^T
        xt = tri_solve(T, np.asarray(B, dtype=float).T, side="left",
                       transpose=not transpose, symmetric_out=symmetric_out, flops=f)
        return xt.T
    b = np.array(B, dtype=float, ndmin=2, copy=True)
    squeeze = np.asarray(B).ndim == 1
    if squeeze:
        b = b.T
    n = T.n
    if b.shape[0] != n:
        raise ValueError(f"rhs has {b.shape[0]} rows, factor is {n}x{n}")
    _check_diag(T)
    m = T.r.T if transpose else T.r
    x = b
    if _effective_lower(T, transpose):
        for i in range(n):
            if i:
                x[i, :] -= m[i, :i] @ x[:i, :]
            x[i, :] /= m[i, i]
    else:
        for i in range(n - 1, -1, -1):
            if i < n - 1:
                x[i, :] -= m[i, i + 1:] @ x[i + 1:, :]
            x[i, :] /= m[i, i]
    k = x.shape[1]
    if symmetric_out:
        f.count(adds=(n**3 - n) // 6, muls=(n**3 - n) // 6, divs=n * (n + 1) // 2)
        f.charge_formula(n**3 / 3.0)
    else:
        f.count(adds=k * n * (n - 1) // 2, muls=k * n * (n - 1) // 2, divs=k * n)
        f.charge_formula(float(k) * n * n)
    return x[:, 0] if squeeze else x


def tri_mult(
    T: TriangularFactor,
    B: np.ndarray,
    side: str = "left",
    transpose: bool = False,
    symmetric_out: bool = False,
    flops: FlopCounter | None = None,
) -> np.ndarray:
    """Product of a triangular factor with a dense matrix (T B, B T, ...)."""
    f = counter_or_new(flops)
    b = np.asarray(B, dtype=float)
    m = T.r.T if transpose else T.r
    out = m @ b if side == "left" else b @ m
    n = T.n
    k = b.shape[1] if b.ndim == 2 else 1
    if symmetric_out:
        f.count(adds=(n**3 - n) // 6, muls=(n**3 + 2 * n) // 6)
        f.charge_formula(n**3 / 3.0)
    else:
        f.count(adds=k * n * (n - 1) // 2, muls=k * n * (n + 1) // 2)
        f.charge_formula(float(k) * n * n)
    return out


def triangular_inverse(T: TriangularFactor, flops: FlopCounter | None = None) -> TriangularFactor:
    """Explicit inverse of a triangular factor (same orientation)."""
    f = counter_or_new(flops)
    n = T.n
    _check_diag(T)
    upper = T.orientation == "upper"
    m = T.r if upper else T.r.T
    x = np.eye(n)
    for i in range(n - 1, -1, -1):
        if i < n - 1:
            x[i, i:] -= m[i, i + 1:] @ x[i + 1:, i:]
        x[i, i:] /= m[i, i]
    f.count(adds=(n**3 - n) // 6, muls=(n**3 - n) // 6, divs=n * (n + 1) // 2)
    f.charge_formula(n**3 / 3.0)
    inv = x if upper else x.T
    return TriangularFactor(inv, T.orientation)


def tri_tri_mult(L1: TriangularFactor, L2: TriangularFactor,
                 flops: FlopCounter | None = None) -> TriangularFactor:
    """Product of two triangular factors of the same orientation."""
    if L1.orientation != L2.orientation:
        raise ValueError("factors must share an orientation")
    f = counter_or_new(flops)
    n = L1.n
    out = L1.r @ L2.r
    f.count(muls=(n**3 + 3 * n**2 + 2 * n) // 6, adds=(n**3 - n) // 6)
    f.charge_formula(n**3 / 3.0)
    return TriangularFactor(out, L1.orientation)


def matmul(a: np.ndarray, b: np.ndarray, symmetric_out: bool = False,
           flops: FlopCounter | None = None) -> np.ndarray:
    """Dense product with flop accounting (half cost for symmetric results)."""
    f = counter_or_new(flops)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    out = a @ b
    m, k = a.shape
    p = b.shape[1] if b.ndim == 2 else 1
    if symmetric_out:
        f.count(muls=m * k * p // 2, adds=m * (k - 1) * p // 2)
        f.charge_formula(float(m) * k * p)
        return symmetrize(out)
    f.count(muls=m * k * p, adds=m * (k - 1) * p)
    f.charge_formula(2.0 * m * k * p)
    return out


def scale_columns(q: np.ndarray, vals: np.ndarray, flops: FlopCounter | None = None) -> np.ndarray:
    """Q diag(vals), charged as an n^2 scaling."""
    f = counter_or_new(flops)
    f.count(muls=q.size)
    return q * np.asarray(vals)[np.newaxis, :]


def sym_inverse(A: SymMatrix, flops: FlopCounter | None = None) -> SymMatrix:
    """Inverse of an SPD matrix via its Cholesky factor (cost n^3)."""
    f = counter_or_new(flops)
    r = cholesky(A, flops=f)
    v = triangular_inverse(r, flops=f)
    # V V^T with V upper triangular: symmetric result, one-triangle cost.
    n = A.n
    out = v.r @ v.r.T
    f.count(muls=(n**3 + 3 * n**2 + 2 * n) // 6, adds=(n**3 - n) // 6)
    f.charge_formula(n**3 / 3.0)
    return SymMatrix(symmetrize(out), _trusted=True)


def congruence_sandwich(T, X: SymMatrix, mode: str = "forward",
                        flops: FlopCounter | None = None) -> SymMatrix:
    """T X T^T (mode="forward") or T^{-1} X T^{-T} (mode="inverse").

    ``T`` may be a :class:`TriangularFactor` or a :class:`SymMatrix`; the
    symmetric result is re-symmetrised canonically.
    """
    f = counter_or_new(flops)
    if mode not in ("forward", "inverse"):
        raise ValueError(f"bad mode {mode!r}")
    if isinstance(T, TriangularFactor):
        if mode == "forward":
            y = tri_mult(T, X.a, flops=f)
            out = tri_mult(T, y.T, transpose=False, symmetric_out=True, flops=f)
            # (T Y^T)^T = Y T^T; symmetric target so the transpose is free
            return SymMatrix(symmetrize(out.T), _trusted=True)
        y = tri_solve(T, X.a, flops=f)
        out = tri_solve(T, y.T, symmetric_out=True, flops=f)
        return SymMatrix(symmetrize(out.T), _trusted=True)
    if isinstance(T, SymMatrix):
        if mode == "forward":
            y = matmul(T.a, X.a, flops=f)
            out = matmul(y, T.a, symmetric_out=True, flops=f)
            return SymMatrix(out, _trusted=True)
        r = cholesky(T, flops=f)
        inner = congruence_sandwich(r.transpose(), X, mode="inverse", flops=f)
        out = congruence_sandwich(r, inner, mode="inverse", flops=f)
        return out
    raise TypeError(f"unsupported sandwich factor {type(T).__name__}")


def comparison_matrix(T: TriangularFactor, flops: FlopCounter | None = None) -> TriangularFactor:
    """M(T): |t_ii| on the diagonal, -|t_ij| off it."""
    m = -np.abs(T.r)
    np.fill_diagonal(m, np.abs(T.diagonal))
    return TriangularFactor(m, T.orientation)


def lu_factor(a: np.ndarray, flops: FlopCounter | None = None):
    """Partial-pivoting LU: returns (packed LU, row permutation)."""
    f = counter_or_new(flops)
    lu = np.array(a, dtype=float, copy=True)
    n = lu.shape[0]
    perm = np.arange(n)
    for k in range(n):
        j = k + int(np.argmax(np.abs(lu[k:, k])))
        if lu[j, k] == 0.0:
            raise SingularFactor(f"LU pivot {k + 1} is exactly zero")
        if j != k:
            lu[[k, j], :] = lu[[j, k], :]
            perm[[k, j]] = perm[[j, k]]
        m = n - k - 1
        if m:
            lu[k + 1:, k] /= lu[k, k]
            lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
        f.count(divs=m, muls=m * m, adds=m * m)
    f.charge_formula(2.0 * n**3 / 3.0)
    return lu, perm


def lu_solve(lu: np.ndarray, perm: np.ndarray, b: np.ndarray,
             transpose: bool = False, flops: FlopCounter | None = None) -> np.ndarray:
    """Solve A X = B (or A^T X = B) from a packed LU factorisation."""
    f = counter_or_new(flops)
    n = lu.shape[0]
    x = np.array(b, dtype=float, ndmin=2, copy=True)
    squeeze = np.asarray(b).ndim == 1
    if squeeze:
        x = x.T
    k = x.shape[1]
    if not transpose:
        x = x[perm, :]
        for i in range(1, n):  # unit lower
            x[i, :] -= lu[i, :i] @ x[:i, :]
        for i in range(n - 1, -1, -1):  # upper
            if i < n - 1:
                x[i, :] -= lu[i, i + 1:] @ x[i + 1:, :]
            x[i, :] /= lu[i, i]
    else:
        # A^T = U^T L^T P: forward with U^T, back with unit L^T, unpermute.
        for i in range(n):
            if i:
                x[i, :] -= lu[:i, i] @ x[:i, :]
            x[i, :] /= lu[i, i]
        for i in range(n - 1, -1, -1):
            if i < n - 1:
                x[i, :] -= lu[i + 1:, i] @ x[i + 1:, :]
        out = np.empty_like(x)
        out[perm, :] = x
        x = out
    f.count(muls=k * n * (n - 1), adds=k * n * (n - 1), divs=k * n)
    f.charge_formula(2.0 * k * n * n)
    return x[:, 0] if squeeze else x
