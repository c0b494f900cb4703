"""Seeded random SPD matrices with a prescribed 2-norm condition number.

Eigenvalues form the geometric grid v^i, i = 0..n-1 with v = (1/cnd)^(1/(n-1)),
so their logarithms are uniform between 0 and log(1/cnd); the eigenbasis is
the Q factor of a QR factorisation of an iid uniform(0,1) matrix with R's
diagonal signs fixed positive.  Matrix i of a batch uses the RNG stream
seeded with (seed XOR i), so batches are reproducible under reordering and
parallel generation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import BadParameter
from ..types import SymMatrix

_MASK64 = (1 << 64) - 1

# Salt separating the B-matrix stream from the A-matrix stream in paired draws.
PAIR_SALT = 0x9E3779B97F4A7C15


@dataclass(frozen=True)
class GenSpec:
    n: int
    cnd: float
    seed: int
    count: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise BadParameter(f"dimension must be positive, got {self.n}")
        if not self.cnd >= 1.0:
            raise BadParameter(f"target condition number must be >= 1, got {self.cnd}")
        if self.cnd > 1.0 and self.n < 2:
            raise BadParameter("n >= 2 is required when cnd > 1")
        if self.count < 1:
            raise BadParameter(f"count must be positive, got {self.count}")


def trial_seed(seed: int, index: int) -> int:
    return (seed ^ index) & _MASK64


def eigenvalue_grid(n: int, cnd: float) -> np.ndarray:
    if n == 1:
        return np.ones(1)
    v = (1.0 / cnd) ** (1.0 / (n - 1))
    return v ** np.arange(n)


def random_spd(n: int, cnd: float, rng: np.random.Generator) -> SymMatrix:
    d = eigenvalue_grid(n, cnd)
    q, r = np.linalg.qr(rng.random((n, n)))
    s = np.sign(np.diag(r))
    s[s == 0.0] = 1.0
    q = q * s[np.newaxis, :]
    return SymMatrix((q * d[np.newaxis, :]) @ q.T)


def gen_spd(spec: GenSpec) -> list[SymMatrix]:
    """One SPD matrix per trial index, deterministic per (seed, index)."""
    out = []
    for i in range(spec.count):
        rng = np.random.default_rng(trial_seed(spec.seed, i))
        out.append(random_spd(spec.n, spec.cnd, rng))
    return out


def spd_pair(n: int, cond_a: float, cond_b: float, seed: int,
             index: int) -> tuple[SymMatrix, SymMatrix]:
    """The (A, B) pair for one trial; B draws from a salted stream."""
    rng_a = np.random.default_rng(trial_seed(seed, index))
    rng_b = np.random.default_rng(trial_seed(seed ^ PAIR_SALT, index))
    return random_spd(n, cond_a, rng_a), random_spd(n, cond_b, rng_b)
