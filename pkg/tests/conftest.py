import numpy as np
import pytest

from pencilfun.harness.generate import random_spd, spd_pair
from pencilfun.types import SymMatrix, symmetrize


def make_spd(n: int, cnd: float, seed: int) -> SymMatrix:
    return random_spd(n, cnd, np.random.default_rng(seed))


def make_pair(n: int, cond_a: float, cond_b: float, seed: int, index: int = 0):
    return spd_pair(n, cond_a, cond_b, seed, index)


def random_sym(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return symmetrize(rng.standard_normal((n, n)))


def fro(x) -> float:
    a = x.a if isinstance(x, SymMatrix) else np.asarray(x)
    return float(np.linalg.norm(a))


def rel_err(x, ref) -> float:
    xa = x.a if isinstance(x, SymMatrix) else np.asarray(x)
    ra = ref.a if isinstance(ref, SymMatrix) else np.asarray(ref)
    return float(np.linalg.norm(xa - ra) / np.linalg.norm(ra))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
