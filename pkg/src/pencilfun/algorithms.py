"""The four ways of computing A f(A^{-1}B) for SPD A and symmetric B.

* ``naive``          -- form X = A^{-1}B by a factored solve, apply f through
                        a dense nonsymmetric eigendecomposition, multiply by A.
* ``sqrt_schur``     -- symmetric form through the principal square root of A.
* ``chol_schur``     -- congruence through the Cholesky factor of A.
* ``chol_schur_pd``  -- both matrices SPD: congruence built from the two
                        Cholesky factors.

Each algorithm returns a :class:`PencilResult` carrying the symmetrised
result, the spectrum of the congruence-transformed middle matrix, flop
counters, and wall time.  Variants select the cheaper execution paths; the
default is the fastest variant of each algorithm.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import IllConditionedEigenvectors, NotPositiveDefinite
from .eigen import eig_sym, pd_tolerance, sym_sqrt
from .flops import FlopCounter
from .functions import FunctionSpec
from .general_eigen import general_eig
from .kernels import (
    cholesky,
    congruence_sandwich,
    lu_factor,
    lu_solve,
    matmul,
    scale_columns,
    sym_inverse,
    tri_mult,
    tri_solve,
    tri_tri_mult,
    triangular_inverse,
)
from .precision import UNIT_ROUNDOFF
from .types import SymMatrix, TriangularFactor, symmetrize

ALGORITHMS = ("naive", "sqrt_schur", "chol_schur", "chol_schur_pd")

DEFAULT_VARIANTS = {
    "naive": "eig",
    "sqrt_schur": "fast",
    "chol_schur": "fast_product",
    "chol_schur_pd": "fast",
}

VARIANTS = {
    "naive": ("eig",),
    "sqrt_schur": ("standard", "fast"),
    "chol_schur": ("standard", "fast_solve", "fast_product"),
    "chol_schur_pd": ("standard", "fast"),
}


@dataclass
class AlgorithmTrace:
    """Optional captures of the intermediate matrices, for error studies."""

    s1: np.ndarray | None = None
    s2: np.ndarray | None = None
    s3: np.ndarray | None = None
    s4: np.ndarray | None = None
    q: np.ndarray | None = None


@dataclass
class PencilResult:
    s5: SymMatrix
    eigenvalues: np.ndarray
    flops: FlopCounter
    wall_time: float
    algorithm: str
    variant: str
    trace: AlgorithmTrace | None = None


def _finish(s5, lam, f, t0, algorithm, variant, trace):
    return PencilResult(
        s5=s5,
        eigenvalues=np.asarray(lam, dtype=float),
        flops=f,
        wall_time=time.perf_counter() - t0,
        algorithm=algorithm,
        variant=variant,
        trace=trace,
    )


def naive(A: SymMatrix, B: SymMatrix, spec: FunctionSpec,
          want_trace: bool = False) -> PencilResult:
    """A * f(A \\ B): factored solve, then f via V diag(f(lambda)) V^{-1}.

    X = A^{-1}B is similar to the symmetric A^{-1/2} B A^{-1/2}, so its
    spectrum is real; an eigenvector basis with condition number above 1/u
    triggers an :class:`IllConditionedEigenvectors` warning.
    """
    f = FlopCounter()
    t0 = time.perf_counter()
    r = cholesky(A, flops=f)
    w = tri_solve(r, B.a, transpose=True, flops=f)
    x = tri_solve(r, w, flops=f)
    lam, v = general_eig(x, flops=f)
    spec.check_domain(lam)
    lu, perm = lu_factor(v, flops=f)
    cond_v = _cond_from_lu(v, lu, perm)
    if cond_v > 1.0 / UNIT_ROUNDOFF:
        warnings.warn(
            IllConditionedEigenvectors(
                f"eigenvector basis condition {cond_v:.3e} exceeds 1/u"
            )
        )
    w = scale_columns(v, spec.f(lam), flops=f)
    fx = lu_solve(lu, perm, w.T, transpose=True, flops=f).T
    s5 = SymMatrix(matmul(A.a, fx, flops=f))
    trace = AlgorithmTrace(s3=x, q=v) if want_trace else None
    return _finish(s5, np.sort(lam), f, t0, "naive", "eig", trace)


def _cond_from_lu(v: np.ndarray, lu: np.ndarray, perm: np.ndarray,
                  iters: int = 30) -> float:
    """2-norm condition estimate of v by forward/inverse power iteration."""
    n = v.shape[0]
    x = np.full(n, 1.0 / math.sqrt(n))
    for _ in range(iters):
        y = v.T @ (v @ x)
        ny = float(np.sqrt(y @ y))
        if ny == 0.0:
            return math.inf
        x = y / ny
    vx = v @ x
    smax = math.sqrt(float(vx @ vx))
    x = np.full(n, 1.0 / math.sqrt(n))
    for _ in range(iters):
        y = lu_solve(lu, perm, lu_solve(lu, perm, x, transpose=False), transpose=True)
        ny = float(np.sqrt(y @ y))
        if ny == 0.0:
            return math.inf
        x = y / ny
    w = lu_solve(lu, perm, x)
    smin_inv = float(np.sqrt(w @ w))
    if smin_inv == 0.0:
        return math.inf
    return smax * smin_inv


def _apply_spectral(spec, lam):
    flam = np.asarray(spec.f(lam), dtype=float)
    return flam


def sqrt_schur(A: SymMatrix, B: SymMatrix, spec: FunctionSpec,
               variant: str = "fast", want_trace: bool = False) -> PencilResult:
    """Square-root route: S5 = A^{1/2} f(A^{-1/2} B A^{-1/2}) A^{1/2}."""
    if variant not in VARIANTS["sqrt_schur"]:
        raise ValueError(f"unknown sqrt_schur variant {variant!r}")
    f = FlopCounter()
    t0 = time.perf_counter()
    s1 = sym_sqrt(A, flops=f)
    s2 = None
    if variant == "standard":
        s2 = sym_inverse(s1, flops=f)
        s3 = congruence_sandwich(s2, B, mode="forward", flops=f)
    else:
        r = cholesky(s1, flops=f)
        k = congruence_sandwich(r.transpose(), B, mode="inverse", flops=f)
        s3 = congruence_sandwich(r, k, mode="inverse", flops=f)
    ed = eig_sym(s3, flops=f)
    spec.check_domain(ed.lam)
    flam = _apply_spectral(spec, ed.lam)
    w = scale_columns(ed.q, flam, flops=f)
    s4 = SymMatrix(matmul(w, ed.q.T, symmetric_out=True, flops=f), _trusted=True)
    s5 = congruence_sandwich(s1, s4, mode="forward", flops=f)
    trace = AlgorithmTrace(
        s1=s1.a, s2=None if s2 is None else s2.a, s3=s3.a, s4=s4.a, q=ed.q
    ) if want_trace else None
    return _finish(s5, ed.lam, f, t0, "sqrt_schur", variant, trace)


def chol_schur(A: SymMatrix, B: SymMatrix, spec: FunctionSpec,
               variant: str = "fast_product", want_trace: bool = False) -> PencilResult:
    """Cholesky route: A = R^T R, S5 = R^T f(R^{-T} B R^{-1}) R."""
    if variant not in VARIANTS["chol_schur"]:
        raise ValueError(f"unknown chol_schur variant {variant!r}")
    f = FlopCounter()
    t0 = time.perf_counter()
    r = cholesky(A, flops=f)
    s1 = r.transpose()  # lower
    s2 = None
    if variant == "standard":
        s2 = triangular_inverse(s1, flops=f)
        y = tri_mult(s2, B.a, flops=f)
        s3 = SymMatrix(symmetrize(tri_mult(s2, y.T, symmetric_out=True, flops=f).T),
                       _trusted=True)
    else:
        s3 = congruence_sandwich(s1, B, mode="inverse", flops=f)
    ed = eig_sym(s3, flops=f)
    spec.check_domain(ed.lam)
    flam = _apply_spectral(spec, ed.lam)
    s4 = None
    if variant == "fast_product":
        st = tri_mult(s1, ed.q, flops=f)
        w = scale_columns(st, flam, flops=f)
        s5 = SymMatrix(matmul(w, st.T, symmetric_out=True, flops=f), _trusted=True)
    else:
        w = scale_columns(ed.q, flam, flops=f)
        s4 = SymMatrix(matmul(w, ed.q.T, symmetric_out=True, flops=f), _trusted=True)
        s5 = congruence_sandwich(s1, s4, mode="forward", flops=f)
    trace = AlgorithmTrace(
        s1=s1.r, s2=None if s2 is None else s2.r, s3=s3.a,
        s4=None if s4 is None else s4.a, q=ed.q
    ) if want_trace else None
    return _finish(s5, ed.lam, f, t0, "chol_schur", variant, trace)


def chol_schur_pd(A: SymMatrix, B: SymMatrix, spec: FunctionSpec,
                  variant: str = "fast", want_trace: bool = False) -> PencilResult:
    """Both-SPD route: factor A and B, S3 = (R_A^{-T} R_B^T)(R_A^{-T} R_B^T)^T."""
    if variant not in VARIANTS["chol_schur_pd"]:
        raise ValueError(f"unknown chol_schur_pd variant {variant!r}")
    f = FlopCounter()
    t0 = time.perf_counter()
    try:
        ra = cholesky(A, flops=f)
    except NotPositiveDefinite as exc:
        raise NotPositiveDefinite(f"first input: {exc}", pivot=exc.pivot) from None
    try:
        rb = cholesky(B, flops=f)
    except NotPositiveDefinite as exc:
        raise NotPositiveDefinite(f"second input: {exc}", pivot=exc.pivot) from None
    la = ra.transpose()
    lb = rb.transpose()
    if variant == "standard":
        s1 = triangular_inverse(la, flops=f)
        s2 = tri_tri_mult(s1, lb, flops=f)
    else:
        s2 = TriangularFactor(tri_solve(la, lb.r, flops=FlopCounter()), "lower")
        # L_A^{-1} L_B: triangular rhs, one-triangle cost
        f.count(adds=(la.n**3 - la.n) // 6, muls=(la.n**3 - la.n) // 6,
                divs=la.n * (la.n + 1) // 2)
        f.charge_formula(la.n**3 / 3.0)
    n = A.n
    s3 = SymMatrix(symmetrize(s2.r @ s2.r.T), _trusted=True)
    f.count(muls=(n**3 + 3 * n**2 + 2 * n) // 6, adds=(n**3 - n) // 6)
    f.charge_formula(n**3 / 3.0)
    ed = eig_sym(s3, flops=f)
    spec.check_domain(ed.lam)
    flam = _apply_spectral(spec, ed.lam)
    s4 = None
    if variant == "fast":
        st = tri_mult(ra, ed.q, transpose=True, flops=f)
        w = scale_columns(st, flam, flops=f)
        s5 = SymMatrix(matmul(w, st.T, symmetric_out=True, flops=f), _trusted=True)
    else:
        w = scale_columns(ed.q, flam, flops=f)
        s4 = SymMatrix(matmul(w, ed.q.T, symmetric_out=True, flops=f), _trusted=True)
        y = tri_mult(ra, s4.a, transpose=True, flops=f)
        s5 = SymMatrix(symmetrize(tri_mult(ra, y.T, transpose=True,
                                           symmetric_out=True, flops=f).T), _trusted=True)
    trace = AlgorithmTrace(
        s1=la.r, s2=s2.r, s3=s3.a, s4=None if s4 is None else s4.a, q=ed.q
    ) if want_trace else None
    return _finish(s5, ed.lam, f, t0, "chol_schur_pd", variant, trace)


def phi(A: SymMatrix, B: SymMatrix, spec: FunctionSpec,
        algorithm: str = "chol_schur", variant: str | None = None,
        want_trace: bool = False) -> PencilResult:
    """Uniform entry point dispatching to the four algorithms."""
    if algorithm not in ALGORITHMS:
        raise ValueError(
            f"unknown algorithm {algorithm!r}; available: {', '.join(ALGORITHMS)}"
        )
    if variant is None:
        variant = DEFAULT_VARIANTS[algorithm]
    if algorithm == "naive":
        return naive(A, B, spec, want_trace=want_trace)
    if algorithm == "sqrt_schur":
        return sqrt_schur(A, B, spec, variant=variant, want_trace=want_trace)
    if algorithm == "chol_schur":
        return chol_schur(A, B, spec, variant=variant, want_trace=want_trace)
    return chol_schur_pd(A, B, spec, variant=variant, want_trace=want_trace)
