"""Fréchet derivative, Kronecker-form condition number, and norm bounds.

The derivative of phi(A, B) = A f(A^{-1}B) in the direction (H, L) is

    Dphi[H, L] = H f(A^{-1}B) + A Df(A^{-1}B)[-A^{-1} H A^{-1}B + A^{-1} L],

evaluated through the eigenbasis of the Cholesky congruence of the pencil
and the divided-difference Hadamard multiplier.  The vec-basis blocks
M1, M2 give the exact operator norm for small n; larger problems use power
iteration on the operator in matrix space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence, SizeCapExceeded
from .eigen import eig_sym, pd_tolerance
from .functions import FunctionSpec, dd_table
from .kernels import cholesky, comparison_matrix, tri_solve, triangular_inverse
from .norms import frobenius_norm, two_norm_power
from .algorithms import chol_schur
from .types import SymMatrix, TriangularFactor, symmetrize

KRONECKER_SIZE_CAP = 32   # n^4 memory beyond this
EXACT_NORM_CAP = 12       # Gram eigenvalue up to here, power iteration above
POWER_TOL = 1e-10
POWER_CAP = 10_000


@dataclass
class FrechetRequest:
    A: SymMatrix
    B: SymMatrix
    H: np.ndarray
    L: np.ndarray
    spec: FunctionSpec

    def __post_init__(self):
        n = self.A.n
        self.H = np.asarray(self.H, dtype=float)
        self.L = np.asarray(self.L, dtype=float)
        for name, m in (("B", self.B.a), ("H", self.H), ("L", self.L)):
            if m.shape != (n, n):
                raise ValueError(f"{name} has shape {m.shape}, expected {(n, n)}")


@dataclass
class KroneckerDerivative:
    M1: np.ndarray
    M2: np.ndarray
    Z1hat: np.ndarray
    Z2hat: np.ndarray
    Delta1: np.ndarray
    Delta2: np.ndarray


@dataclass
class BoundsResult:
    bound_lemma3: float
    bound_eq14: float
    mu_A: float
    mu_B: float
    max_dd: float
    max_dual_dd: float


@dataclass
class ConditionReport:
    cond_phi: float
    dphi_norm: float
    bound_lemma3: float
    bound_eq14: float
    mu_A: float
    mu_B: float
    psi_RA: float


class _PencilBasis:
    """Eigenbasis of A^{-1}B through the Cholesky congruence of A."""

    def __init__(self, A: SymMatrix, B: SymMatrix, spec: FunctionSpec):
        self.r = cholesky(A)
        s3 = _chol_congruence(self.r, B)
        ed = eig_sym(s3)
        spec.check_domain(ed.lam)
        self.lam = ed.lam
        rinv = triangular_inverse(self.r).r
        self.z = rinv @ ed.q          # Z diagonalises A^{-1}B
        self.zinv = ed.q.T @ self.r.r
        self.F = dd_table(spec, ed.lam).F

    def fun(self, spec: FunctionSpec) -> np.ndarray:
        """f(A^{-1}B) = Z f(Lambda) Z^{-1}."""
        return (self.z * np.asarray(spec.f(self.lam))[np.newaxis, :]) @ self.zinv

    def dfun(self, E: np.ndarray) -> np.ndarray:
        """Df(A^{-1}B)[E] via the divided-difference Hadamard multiplier."""
        w = self.zinv @ E @ self.z
        return self.z @ (self.F * w) @ self.zinv

    def solve(self, X: np.ndarray) -> np.ndarray:
        """A^{-1} X from the Cholesky factor."""
        return tri_solve(self.r, tri_solve(self.r, X, transpose=True))


def _chol_congruence(r: TriangularFactor, B: SymMatrix) -> SymMatrix:
    y = tri_solve(r, B.a, transpose=True)
    return SymMatrix(symmetrize(tri_solve(r, y.T, transpose=True).T), _trusted=True)


def frechet_apply(req: FrechetRequest) -> np.ndarray:
    """Dphi(A, B)[H, L] evaluated directly."""
    basis = _PencilBasis(req.A, req.B, req.spec)
    ainv_h = basis.solve(req.H)
    ainv_l = basis.solve(req.L)
    ainv_b = basis.solve(req.B.a)
    e = -ainv_h @ ainv_b + ainv_l
    return req.H @ basis.fun(req.spec) + req.A.a @ basis.dfun(e)


def frechet_apply_dual_route(req: FrechetRequest) -> np.ndarray:
    """Same derivative via B Dfhat(B^{-1}A)[B^{-1}H] + A Df(A^{-1}B)[A^{-1}L].

    Needs B to be SPD.  Used to cross-check :func:`frechet_apply`.
    """
    basis_a = _PencilBasis(req.A, req.B, req.spec)
    term2 = req.A.a @ basis_a.dfun(basis_a.solve(req.L))
    dual = req.spec.dual()
    basis_b = _PencilBasis(req.B, req.A, dual)
    term1 = req.B.a @ basis_b.dfun(basis_b.solve(req.H))
    return term1 + term2


class _SideFactors:
    """Square-root congruence factors for one side of the pencil."""

    def __init__(self, M: SymMatrix, other: SymMatrix, spec: FunctionSpec):
        ed = eig_sym(M)
        tol = pd_tolerance(ed.lam)
        from .errors import NotPositiveDefinite

        if not (ed.lam[-1] > 0.0 and ed.lam[0] > tol):
            raise NotPositiveDefinite(
                f"eigenvalue {ed.lam[0]:.6g} fails the SPD tolerance {tol:.6g}"
            )
        root = np.sqrt(ed.lam)
        half = SymMatrix(symmetrize((ed.q * root[np.newaxis, :]) @ ed.q.T), _trusted=True)
        inv_half = SymMatrix(
            symmetrize((ed.q / root[np.newaxis, :]) @ ed.q.T), _trusted=True)
        inner = SymMatrix(symmetrize(inv_half.a @ other.a @ inv_half.a), _trusted=True)
        ed1 = eig_sym(inner)
        spec.check_domain(ed1.lam)
        self.lam = ed1.lam
        self.zhat = inv_half.a @ ed1.q           # diagonalising factor
        self.g = half.a @ ed1.q                  # zhat^{-T}
        self.gi = ed1.q.T @ inv_half.a           # zhat^{T} = g^{-1}
        self.F = dd_table(spec, ed1.lam).F

    def apply(self, X: np.ndarray) -> np.ndarray:
        return self.g @ (self.F * (self.gi @ X @ self.gi.T)) @ self.g.T

    def apply_t(self, X: np.ndarray) -> np.ndarray:
        return self.gi.T @ (self.F * (self.g.T @ X @ self.g)) @ self.gi


def kronecker_forms(A: SymMatrix, B: SymMatrix, spec: FunctionSpec,
                    size_cap: int = KRONECKER_SIZE_CAP) -> KroneckerDerivative:
    """Dense vec-basis blocks: vec(Dphi[H, L]) = M2 vec(H) + M1 vec(L)."""
    n = A.n
    if n > size_cap:
        raise SizeCapExceeded(
            f"dense Kronecker form needs n <= {size_cap}, got {n}"
        )
    side1 = _SideFactors(A, B, spec)
    side2 = _SideFactors(B, A, spec.dual())
    d1 = side1.F.ravel(order="F")
    d2 = side2.F.ravel(order="F")
    m1 = np.kron(side1.g, side1.g) * d1[np.newaxis, :] @ np.kron(side1.gi, side1.gi)
    m2 = np.kron(side2.g, side2.g) * d2[np.newaxis, :] @ np.kron(side2.gi, side2.gi)
    return KroneckerDerivative(
        M1=m1, M2=m2, Z1hat=side1.zhat, Z2hat=side2.zhat, Delta1=d1, Delta2=d2
    )


def _dphi_norm_exact(kd: KroneckerDerivative) -> float:
    gram = SymMatrix(kd.M1 @ kd.M1.T + kd.M2 @ kd.M2.T)
    lam = eig_sym(gram).lam
    return math.sqrt(max(float(lam[-1]), 0.0))


def _dphi_norm_power(A: SymMatrix, B: SymMatrix, spec: FunctionSpec,
                     tol: float = POWER_TOL, cap: int = POWER_CAP) -> float:
    """||[M2 M1]|| by power iteration on the operator in matrix space."""
    side1 = _SideFactors(A, B, spec)
    side2 = _SideFactors(B, A, spec.dual())
    n = A.n
    x = symmetrize(np.eye(n) + 0.01 * np.fromfunction(lambda i, j: (i + 2 * j) % 5, (n, n)))
    x /= frobenius_norm(x)
    rho_prev = -1.0
    streak = 0
    for _ in range(cap):
        y = side1.apply(side1.apply_t(x)) + side2.apply(side2.apply_t(x))
        rho = float(np.sum(x * y))
        ny = frobenius_norm(y)
        if ny == 0.0:
            return 0.0
        x = y / ny
        if rho_prev >= 0.0 and abs(rho - rho_prev) <= tol * max(rho, 1e-300):
            streak += 1
            if streak >= 3:
                return math.sqrt(max(rho, 0.0))
        else:
            streak = 0
        rho_prev = rho
    raise NoConvergence(f"operator-norm power iteration hit the {cap}-iteration cap")


def dphi_norm(A: SymMatrix, B: SymMatrix, spec: FunctionSpec,
              exact_cap: int = EXACT_NORM_CAP) -> float:
    """Frobenius-operator norm of the Fréchet derivative of phi."""
    if A.n <= exact_cap:
        return _dphi_norm_exact(kronecker_forms(A, B, spec))
    return _dphi_norm_power(A, B, spec)


def derivative_norm_bounds(A: SymMatrix, B: SymMatrix, spec: FunctionSpec) -> BoundsResult:
    """Upper bounds on ||Dphi||_F from the divided-difference extremes."""
    lam_a = eig_sym(A).lam
    lam_b = eig_sym(B).lam
    from .errors import NotPositiveDefinite

    for lam, which in ((lam_a, "first"), (lam_b, "second")):
        if not (lam[-1] > 0.0 and lam[0] > pd_tolerance(lam)):
            raise NotPositiveDefinite(f"{which} input fails the SPD tolerance")
    mu_a = float(lam_a[-1] / lam_a[0])
    mu_b = float(lam_b[-1] / lam_b[0])
    r = cholesky(A)
    lam = eig_sym(_chol_congruence(r, B)).lam  # spectrum of A^{-1}B
    F = dd_table(spec, lam).F
    max_dd = float(np.max(np.abs(F)))
    dual = spec.dual()
    recip = np.sort(1.0 / lam)
    Fhat = dd_table(dual, recip).F
    max_dual_dd = float(np.max(np.abs(Fhat)))
    flam = np.asarray(spec.f(lam), dtype=float)
    resid = np.abs(flam[np.newaxis, :] - F * lam[np.newaxis, :])
    bound3 = math.hypot(mu_a * max_dd, mu_b * max_dual_dd)
    bound14 = mu_a * math.sqrt(max_dd**2 + float(np.max(resid)) ** 2)
    return BoundsResult(
        bound_lemma3=bound3,
        bound_eq14=bound14,
        mu_A=mu_a,
        mu_B=mu_b,
        max_dd=max_dd,
        max_dual_dd=max_dual_dd,
    )


def psi(R: TriangularFactor) -> float:
    """Stability functional ||M(R)^{-1}||_F / ||R^{-1}||_2 (>= 1)."""
    m = comparison_matrix(R)
    minv = triangular_inverse(m).r
    rinv = triangular_inverse(R).r
    return frobenius_norm(minv) / two_norm_power(rinv)


def cond_phi(A: SymMatrix, B: SymMatrix, spec: FunctionSpec,
             exact_cap: int = EXACT_NORM_CAP) -> ConditionReport:
    """Relative Frobenius-norm condition number of phi at (A, B), with bounds.

    A zero phi(A, B) makes the condition number infinite; that is reported
    as ``math.inf`` rather than an error.
    """
    dphi = dphi_norm(A, B, spec, exact_cap=exact_cap)
    bounds = derivative_norm_bounds(A, B, spec)
    psi_ra = psi(cholesky(A))
    result = chol_schur(A, B, spec)
    phi_norm = frobenius_norm(result.s5)
    ab_norm = math.hypot(frobenius_norm(A), frobenius_norm(B))
    cond = math.inf if phi_norm == 0.0 else dphi * ab_norm / phi_norm
    return ConditionReport(
        cond_phi=cond,
        dphi_norm=dphi,
        bound_lemma3=bounds.bound_lemma3,
        bound_eq14=bounds.bound_eq14,
        mu_A=bounds.mu_A,
        mu_B=bounds.mu_B,
        psi_RA=psi_ra,
    )
