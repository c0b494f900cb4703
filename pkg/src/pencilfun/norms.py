"""Frobenius and spectral norms.

Symmetric inputs get their 2-norm from the eigendecomposition; general
inputs use power iteration on X^T X.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import NoConvergence
from .flops import FlopCounter, counter_or_new
from .eigen import two_norm_sym
from .types import SymMatrix, TriangularFactor

POWER_ITERATION_CAP = 10_000


def _as_array(X) -> np.ndarray:
    if isinstance(X, SymMatrix):
        return X.a
    if isinstance(X, TriangularFactor):
        return X.r
    return np.asarray(X, dtype=float)


def frobenius_norm(X) -> float:
    a = _as_array(X)
    return float(np.sqrt(np.sum(a * a)))


def two_norm_power(a: np.ndarray, flops: FlopCounter | None = None,
                   cap: int = POWER_ITERATION_CAP) -> float:
    """Largest singular value via power iteration on X^T X."""
    f = counter_or_new(flops)
    a = np.asarray(a, dtype=float)
    if not np.any(a):
        return 0.0
    n = a.shape[1]
    v = np.sqrt(np.sum(a * a, axis=0))  # column norms: positive weight everywhere
    nv = math.sqrt(float(v @ v))
    v = v / nv
    if not np.any(a @ v):
        v = np.zeros(n)
        v[int(np.argmax(np.sum(a * a, axis=0)))] = 1.0
    rho_prev = -1.0
    streak = 0
    for _ in range(cap):
        w = a @ v
        rho = float(w @ w)
        u = a.T @ w
        f.count(muls=2 * a.size + w.size, adds=2 * a.size + w.size)
        nu = math.sqrt(float(u @ u))
        if nu == 0.0:
            return math.sqrt(rho)
        v = u / nu
        if abs(rho - rho_prev) <= 1e-13 * rho:
            streak += 1
            if streak >= 3:
                return math.sqrt(rho)
        else:
            streak = 0
        rho_prev = rho
    raise NoConvergence(f"power iteration did not settle within {cap} iterations")


def norms(X, flops: FlopCounter | None = None) -> tuple[float, float]:
    """(Frobenius norm, 2-norm) of X."""
    fro = frobenius_norm(X)
    if isinstance(X, SymMatrix):
        return fro, two_norm_sym(X, flops=flops)
    return fro, two_norm_power(_as_array(X), flops=flops)
