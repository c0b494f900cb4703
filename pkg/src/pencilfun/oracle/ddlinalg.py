"""Double-double dense linear algebra at oracle scale.

Matrices are (hi, lo) ndarray pairs.  Factorisations sweep one pivot row at
a time with vectorised trailing updates; the Jacobi eigensolver uses a
round-robin ordering so each round applies a set of disjoint rotations as
one blocked array operation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import NoConvergence, NotPositiveDefinite
from .ddreal import (
    DDReal,
    dd_div,
    dd_mul,
    dd_sqrt,
    v_add,
    v_mul,
    v_sub,
    v_zeros,
)

JACOBI_SWEEP_CAP = 60
JACOBI_OFF_TARGET = 1e-55  # off-diagonal Frobenius mass relative to ||X||_F


@dataclass
class DDMatrix:
    """Dense matrix with double-double entries."""

    hi: np.ndarray
    lo: np.ndarray = None  # type: ignore[assignment]
    symmetric: bool = False

    def __post_init__(self):
        self.hi = np.array(self.hi, dtype=float)
        if self.lo is None:
            self.lo = np.zeros_like(self.hi)
        else:
            self.lo = np.array(self.lo, dtype=float)
        if self.hi.shape != self.lo.shape:
            raise ValueError("hi and lo parts must share a shape")
        if self.symmetric:
            # canonical symmetric storage: mirror the lower triangle
            il, ju = np.tril_indices(self.n, -1)
            self.hi[ju, il] = self.hi[il, ju]
            self.lo[ju, il] = self.lo[il, ju]

    @classmethod
    def from_float(cls, a: np.ndarray, symmetric: bool = False) -> "DDMatrix":
        return cls(np.array(a, dtype=float), np.zeros_like(np.asarray(a, dtype=float)),
                   symmetric=symmetric)

    @property
    def n(self) -> int:
        return self.hi.shape[0]

    def entry(self, i: int, j: int) -> DDReal:
        return DDReal._raw(float(self.hi[i, j]), float(self.lo[i, j]))

    def to_float(self) -> np.ndarray:
        return self.hi.copy()

    def transpose(self) -> "DDMatrix":
        return DDMatrix(self.hi.T.copy(), self.lo.T.copy())


def dd_mat_sub_float(x: DDMatrix, a: np.ndarray) -> DDMatrix:
    """x - a for a working-precision a (error measurement helper)."""
    h, l = v_sub(x.hi, x.lo, np.asarray(a, dtype=float), 0.0)
    return DDMatrix(h, l)


def dd_fro_norm(x: DDMatrix) -> float:
    m = x.hi + x.lo
    return float(np.sqrt(np.sum(m * m)))


def dd_matmul(a: DDMatrix, b: DDMatrix) -> DDMatrix:
    n, k = a.hi.shape
    k2, m = b.hi.shape
    ch, cl = v_zeros((n, m))
    for t in range(k):
        ph, pl = v_mul(a.hi[:, t:t + 1], a.lo[:, t:t + 1], b.hi[t:t + 1, :], b.lo[t:t + 1, :])
        ch, cl = v_add(ch, cl, ph, pl)
    return DDMatrix(ch, cl)


def dd_symmetrize(x: DDMatrix) -> DDMatrix:
    h, l = v_add(x.hi, x.lo, x.hi.T, x.lo.T)
    return DDMatrix(h * 0.5, l * 0.5, symmetric=True)


def dd_cholesky_lower(a: DDMatrix) -> DDMatrix:
    """Lower factor L with L L^T = A, all in double-double."""
    n = a.n
    ah = a.hi.copy()
    al = a.lo.copy()
    lh, ll = v_zeros((n, n))
    for k in range(n):
        piv = DDReal._raw(float(ah[k, k]), float(al[k, k]))
        if not piv.hi > 0.0:
            raise NotPositiveDefinite(
                f"extended-precision Cholesky pivot {k + 1} is {piv.hi:.6g}",
                pivot=k + 1,
            )
        rkk = dd_sqrt(piv)
        lh[k, k], ll[k, k] = rkk.hi, rkk.lo
        if k + 1 < n:
            rec = dd_div(DDReal._raw(1.0, 0.0), rkk)
            colh, coll = v_mul(ah[k + 1:, k], al[k + 1:, k], rec.hi, rec.lo)
            lh[k + 1:, k], ll[k + 1:, k] = colh, coll
            uh, ul = v_mul(colh[:, None], coll[:, None], colh[None, :], coll[None, :])
            ah[k + 1:, k + 1:], al[k + 1:, k + 1:] = v_sub(
                ah[k + 1:, k + 1:], al[k + 1:, k + 1:], uh, ul)
    return DDMatrix(lh, ll)


def dd_solve_lower(l: DDMatrix, b: DDMatrix) -> DDMatrix:
    """X with L X = B by forward substitution (right-looking)."""
    n = l.n
    xh = b.hi.copy()
    xl = b.lo.copy()
    for i in range(n):
        rec = dd_div(DDReal._raw(1.0, 0.0), l.entry(i, i))
        xh[i, :], xl[i, :] = v_mul(xh[i, :], xl[i, :], rec.hi, rec.lo)
        if i + 1 < n:
            uh, ul = v_mul(l.hi[i + 1:, i:i + 1], l.lo[i + 1:, i:i + 1],
                           xh[i:i + 1, :], xl[i:i + 1, :])
            xh[i + 1:, :], xl[i + 1:, :] = v_sub(xh[i + 1:, :], xl[i + 1:, :], uh, ul)
    return DDMatrix(xh, xl)


def dd_scale_columns(q: DDMatrix, vals: list[DDReal]) -> DDMatrix:
    vh = np.array([v.hi for v in vals])
    vl = np.array([v.lo for v in vals])
    h, l = v_mul(q.hi, q.lo, vh[None, :], vl[None, :])
    return DDMatrix(h, l)


def _round_robin_rounds(n: int):
    """Disjoint pivot pairs covering all (p, q) once per sweep."""
    players = list(range(n))
    if n % 2:
        players.append(-1)
    m = len(players)
    rounds = []
    for _ in range(m - 1):
        pairs = []
        for i in range(m // 2):
            p, q = players[i], players[m - 1 - i]
            if p >= 0 and q >= 0:
                pairs.append((p, q) if p < q else (q, p))
        rounds.append(pairs)
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _rotation_params(app: DDReal, aqq: DDReal, apq: DDReal):
    """Classic Jacobi angle: returns (c, s, t) in double-double."""
    one = DDReal._raw(1.0, 0.0)
    diff = aqq - app
    if abs(apq.hi) * 1e100 < abs(diff.hi):
        t = dd_div(apq, diff)  # tiny angle, avoids theta overflow
    else:
        theta = dd_div(diff, apq * 2.0)
        at = abs(theta)
        t = dd_div(one, at + dd_sqrt(at * at + one))
        if theta.hi < 0.0 or (theta.hi == 0.0 and theta.lo < 0.0):
            t = -t
    c = dd_div(one, dd_sqrt(t * t + one))
    return c, t * c, t


def dd_jacobi_eig(x: DDMatrix, sweep_cap: int = JACOBI_SWEEP_CAP,
                  with_diagnostics: bool = False):
    """Cyclic (round-robin) Jacobi eigendecomposition in double-double.

    Returns (q: DDMatrix, lam: list[DDReal]) with eigenvalues ascending and
    off-diagonal mass driven below 1e-55 * ||X||_F; with diagnostics, also
    the terminal off-diagonal Frobenius mass.
    """
    n = x.n
    ah = x.hi.copy()
    al = x.lo.copy()
    qh, ql = np.eye(n), np.zeros((n, n))
    norm_x = math.sqrt(float(np.sum((ah + al) ** 2)))
    target = JACOBI_OFF_TARGET * norm_x
    if n == 1:
        lam1 = [DDReal._raw(float(ah[0, 0]), float(al[0, 0]))]
        if with_diagnostics:
            return DDMatrix(qh, ql), lam1, 0.0
        return DDMatrix(qh, ql), lam1
    rounds = _round_robin_rounds(n)
    skip_thr = target / max(2.0 * n, 2.0)
    converged = False
    for _ in range(sweep_cap):
        off = ah.copy()
        np.fill_diagonal(off, 0.0)
        if math.sqrt(float(np.sum(off * off))) <= target:
            converged = True
            break
        for pairs in rounds:
            act = [(p, q) for (p, q) in pairs if abs(ah[p, q]) > skip_thr]
            if not act:
                continue
            ps = np.array([p for p, _ in act])
            qs = np.array([q for _, q in act])
            cs, ss = [], []
            for p, q in act:
                c, s, t = _rotation_params(
                    DDReal._raw(float(ah[p, p]), float(al[p, p])),
                    DDReal._raw(float(ah[q, q]), float(al[q, q])),
                    DDReal._raw(float(ah[p, q]), float(al[p, q])),
                )
                cs.append(c)
                ss.append(s)
            ch = np.array([c.hi for c in cs])[:, None]
            cl = np.array([c.lo for c in cs])[:, None]
            sh = np.array([s.hi for s in ss])[:, None]
            sl = np.array([s.lo for s in ss])[:, None]
            # rows, then columns (disjoint pairs: one blocked op each)
            rp_h, rp_l = ah[ps, :], al[ps, :]
            rq_h, rq_l = ah[qs, :], al[qs, :]
            t1h, t1l = v_mul(ch, cl, rp_h, rp_l)
            t2h, t2l = v_mul(sh, sl, rq_h, rq_l)
            np_h, np_l = v_sub(t1h, t1l, t2h, t2l)
            t1h, t1l = v_mul(sh, sl, rp_h, rp_l)
            t2h, t2l = v_mul(ch, cl, rq_h, rq_l)
            nq_h, nq_l = v_add(t1h, t1l, t2h, t2l)
            ah[ps, :], al[ps, :] = np_h, np_l
            ah[qs, :], al[qs, :] = nq_h, nq_l
            cp_h, cp_l = ah[:, ps], al[:, ps]
            cq_h, cq_l = ah[:, qs], al[:, qs]
            crow_ch, crow_cl = ch.T, cl.T
            crow_sh, crow_sl = sh.T, sl.T
            t1h, t1l = v_mul(crow_ch, crow_cl, cp_h, cp_l)
            t2h, t2l = v_mul(crow_sh, crow_sl, cq_h, cq_l)
            np_h, np_l = v_sub(t1h, t1l, t2h, t2l)
            t1h, t1l = v_mul(crow_sh, crow_sl, cp_h, cp_l)
            t2h, t2l = v_mul(crow_ch, crow_cl, cq_h, cq_l)
            nq_h, nq_l = v_add(t1h, t1l, t2h, t2l)
            ah[:, ps], al[:, ps] = np_h, np_l
            ah[:, qs], al[:, qs] = nq_h, nq_l
            ah[ps, qs] = ah[qs, ps] = 0.0
            al[ps, qs] = al[qs, ps] = 0.0
            # accumulate Q on the same column pairs
            cp_h, cp_l = qh[:, ps], ql[:, ps]
            cq_h, cq_l = qh[:, qs], ql[:, qs]
            t1h, t1l = v_mul(crow_ch, crow_cl, cp_h, cp_l)
            t2h, t2l = v_mul(crow_sh, crow_sl, cq_h, cq_l)
            np_h, np_l = v_sub(t1h, t1l, t2h, t2l)
            t1h, t1l = v_mul(crow_sh, crow_sl, cp_h, cp_l)
            t2h, t2l = v_mul(crow_ch, crow_cl, cq_h, cq_l)
            nq_h, nq_l = v_add(t1h, t1l, t2h, t2l)
            qh[:, ps], ql[:, ps] = np_h, np_l
            qh[:, qs], ql[:, qs] = nq_h, nq_l
    off = ah + al
    np.fill_diagonal(off, 0.0)
    off_mass = math.sqrt(float(np.sum(off * off)))
    if not converged and off_mass > target:
        raise NoConvergence(
            f"Jacobi sweeps exceeded {sweep_cap} without reaching the "
            f"off-diagonal target {target:.3e}"
        )
    lam = [DDReal._raw(float(ah[i, i]), float(al[i, i])) for i in range(n)]
    order = sorted(range(n), key=lambda i: (lam[i].hi, lam[i].lo))
    lam = [lam[i] for i in order]
    qh = qh[:, order]
    ql = ql[:, order]
    idx = np.argmax(np.abs(qh), axis=0)
    flip = qh[idx, np.arange(n)] < 0.0
    qh[:, flip] = -qh[:, flip]
    ql[:, flip] = -ql[:, flip]
    if with_diagnostics:
        return DDMatrix(qh, ql), lam, off_mass
    return DDMatrix(qh, ql), lam
