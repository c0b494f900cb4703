"""Dense nonsymmetric eigendecomposition for real-spectrum matrices.

Used by the baseline algorithm on X = A^{-1}B, which is similar to a
symmetric matrix and therefore has a real spectrum.  Pipeline: Householder
Hessenberg reduction, implicit single-shift QR driven to a real Schur form
with the orthogonal transform accumulated, then eigenvectors of the
triangular factor by guarded back-substitution.

A 2x2 trailing block whose eigenvalues come out complex from roundoff is
truncated to a real double eigenvalue when the imaginary part is at most
sqrt(u) * ||X||; a larger imaginary part raises :class:`NoConvergence`.
"""

from __future__ import annotations

import math

import numpy as np

from ._jit import njit
from .errors import NoConvergence
from .flops import FlopCounter, counter_or_new
from .precision import MACHINE_EPS, SQRT_UNIT_ROUNDOFF

QR_ITERATION_CAP = 64  # per eigenvalue


def _hessenberg(a: np.ndarray, f: FlopCounter):
    """A = Z H Z^T with H upper Hessenberg."""
    n = a.shape[0]
    H = a.copy()
    vs: list[np.ndarray | None] = []
    for k in range(n - 2):
        x = H[k + 1:, k]
        m = n - k - 1
        alpha = math.sqrt(float(x @ x))
        if alpha == 0.0:
            vs.append(None)
            continue
        if x[0] > 0.0:
            alpha = -alpha
        v = x.copy()
        v[0] -= alpha
        v /= math.sqrt(float(v @ v))
        vs.append(v)
        H[k + 1:, k:] -= 2.0 * np.outer(v, v @ H[k + 1:, k:])
        H[:, k + 1:] -= 2.0 * np.outer(H[:, k + 1:] @ v, v)
        H[k + 1, k] = alpha
        H[k + 2:, k] = 0.0
        f.count(muls=4 * m * n + 4 * m, adds=4 * m * n, divs=m, sqrts=2)
    z = np.eye(n)
    for k in range(n - 3, -1, -1):
        v = vs[k]
        if v is None:
            continue
        m = n - k - 1
        zb = z[k + 1:, k + 1:]
        zb -= 2.0 * np.outer(v, v @ zb)
        f.count(muls=2 * m * m + m, adds=2 * m * m)
    return H, z


@njit(cache=True)
def _rot_rows(H, k, c, s, j0, j1):
    for j in range(j0, j1):
        hk = H[k, j]
        hk1 = H[k + 1, j]
        H[k, j] = c * hk + s * hk1
        H[k + 1, j] = c * hk1 - s * hk


@njit(cache=True)
def _rot_cols(H, k, c, s, i1):
    for i in range(i1):
        hk = H[i, k]
        hk1 = H[i, k + 1]
        H[i, k] = c * hk + s * hk1
        H[i, k + 1] = c * hk1 - s * hk


@njit(cache=True)
def _split_2x2(H, z, p, imag_tol):
    """Deflate the 2x2 block at (p, p+1); returns False for a true complex pair."""
    n = H.shape[0]
    a = H[p, p]
    b = H[p, p + 1]
    c2 = H[p + 1, p]
    d = H[p + 1, p + 1]
    half = (a - d) / 2.0
    disc = half * half + b * c2
    if disc >= 0.0:
        sq = math.sqrt(disc)
        mid = (a + d) / 2.0
        lam = mid + sq if d >= mid else mid - sq
        vx = b
        vy = lam - a
        wx = lam - d
        wy = c2
        if abs(vx) + abs(vy) < abs(wx) + abs(wy):
            vx = wx
            vy = wy
        if abs(vx) + abs(vy) == 0.0:
            H[p + 1, p] = 0.0
            return True
        r = math.hypot(vx, vy)
        c = vx / r
        s = vy / r
        _rot_rows(H, p, c, s, p, n)
        _rot_cols(H, p, c, s, min(p + 2, n))
        _rot_cols(z, p, c, s, n)
        H[p + 1, p] = 0.0
        return True
    # complex pair from roundoff: balance the diagonal, drop the smaller corner
    imag = math.sqrt(-disc)
    if imag > imag_tol:
        return False
    if half != 0.0 or b + c2 != 0.0:
        denom = 2.0 * (b + c2)
        if denom == 0.0:
            denom = 1e-300
        theta = 0.5 * math.atan2(-2.0 * half, denom)
        c = math.cos(theta)
        s = math.sin(theta)
        _rot_rows(H, p, c, s, p, n)
        _rot_cols(H, p, c, s, min(p + 2, n))
        _rot_cols(z, p, c, s, n)
    if abs(H[p + 1, p]) > abs(H[p, p + 1]):
        # quarter turn swaps the corners
        _rot_rows(H, p, 0.0, 1.0, p, n)
        _rot_cols(H, p, 0.0, 1.0, min(p + 2, n))
        _rot_cols(z, p, 0.0, 1.0, n)
    H[p + 1, p] = 0.0
    mean = (H[p, p] + H[p + 1, p + 1]) / 2.0
    H[p, p] = mean
    H[p + 1, p + 1] = mean
    return True


@njit(cache=True)
def _schur_core(H, z, eps, imag_tol, cap):
    """Drive a Hessenberg matrix to upper triangular form in place.

    Returns (status, rotations); status 0 on success, -1 for a genuinely
    complex pair, m > 0 when the iteration cap was hit at block end m-1.
    """
    n = H.shape[0]
    m = n - 1
    iters = 0
    rotations = 0
    while m > 0:
        l = m
        while l > 0 and abs(H[l, l - 1]) > eps * (abs(H[l - 1, l - 1]) + abs(H[l, l])):
            l -= 1
        if l > 0:
            H[l, l - 1] = 0.0
        if l == m:
            m -= 1
            iters = 0
            continue
        if l == m - 1:
            if not _split_2x2(H, z, l, imag_tol):
                return -1, rotations
            m = l - 1 if l > 0 else 0
            iters = 0
            continue
        iters += 1
        if iters > cap:
            return m + 1, rotations
        a = H[m - 1, m - 1]
        b = H[m - 1, m]
        c2 = H[m, m - 1]
        d = H[m, m]
        half = (a - d) / 2.0
        disc = half * half + b * c2
        if iters % 10 == 0:
            sigma = d + 0.75 * abs(H[m, m - 1])  # exceptional shift
        elif disc >= 0.0:
            sq = math.sqrt(disc)
            mid = (a + d) / 2.0
            sigma = mid + sq if d >= mid else mid - sq
        else:
            sigma = (a + d) / 2.0
        x = H[l, l] - sigma
        zz = H[l + 1, l]
        for k in range(l, m):
            r = math.hypot(x, zz)
            if r == 0.0:
                c = 1.0
                s = 0.0
            else:
                c = x / r
                s = zz / r
            j0 = k - 1 if k > l else l
            _rot_rows(H, k, c, s, j0, n)
            _rot_cols(H, k, c, s, min(k + 3, m + 1))
            _rot_cols(z, k, c, s, n)
            rotations += 1
            if k > l:
                H[k + 1, k - 1] = 0.0
            if k < m - 1:
                x = H[k + 1, k]
                zz = H[k + 2, k]
    return 0, rotations


@njit(cache=True)
def _trevc_core(T, smin):
    """Unit-normalised eigenvector matrix of an upper triangular T."""
    n = T.shape[0]
    y = np.zeros((n, n))
    for k in range(n):
        lam = T[k, k]
        y[k, k] = 1.0
        for i in range(k - 1, -1, -1):
            r = 0.0
            for j in range(i + 1, k + 1):
                r += T[i, j] * y[j, k]
            den = T[i, i] - lam
            if abs(den) < smin:
                den = smin if den >= 0.0 else -smin
            y[i, k] = -r / den
        norm = 0.0
        for i in range(k + 1):
            norm += y[i, k] * y[i, k]
        norm = math.sqrt(norm)
        for i in range(k + 1):
            y[i, k] /= norm
    return y


def general_eig(a: np.ndarray, flops: FlopCounter | None = None):
    """Eigendecomposition a = V diag(lam) V^{-1} for a real-spectrum matrix.

    Returns ``(lam, V)`` with V's columns unit-normalised.  Eigenvalue order
    follows the Schur form (not sorted).
    """
    f = counter_or_new(flops)
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    f.charge_formula(25.0 * n**3)
    if n == 1:
        return a[0, :1].copy(), np.ones((1, 1))
    norm_x = float(np.sqrt(np.sum(a * a)))
    H, z = _hessenberg(a, f)
    status, rotations = _schur_core(H, z, MACHINE_EPS, SQRT_UNIT_ROUNDOFF * norm_x,
                                    QR_ITERATION_CAP)
    if status == -1:
        raise NoConvergence(
            "complex eigenvalue pair beyond the truncation tolerance; "
            "input is not numerically similar to a symmetric matrix"
        )
    if status > 0:
        raise NoConvergence(
            f"QR iteration exceeded {QR_ITERATION_CAP} sweeps near index {status}"
        )
    f.count(muls=rotations * 8 * n, adds=rotations * 4 * n, sqrts=rotations,
            divs=2 * rotations)
    lam = np.diag(H).copy()
    smin = MACHINE_EPS * max(float(np.max(np.abs(H))), 1e-300)
    y = _trevc_core(H, smin)
    v = z @ y
    f.count(muls=n**3 + n * (n * (n + 1)) // 2, adds=n**2 * (n - 1), divs=n, sqrts=n)
    f.charge_formula(3.0 * n**3)
    return lam, v
