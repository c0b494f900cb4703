"""Double-double scalars: error-free transformations and ~31-digit arithmetic.

A value is the unevaluated sum hi + lo with |lo| <= ulp(hi)/2.  The scalar
class works on Python floats; the ``v_*`` functions apply the same formulas
to (hi, lo) ndarray pairs and broadcast like numpy.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import DomainError

_SPLITTER = 134217729.0  # 2**27 + 1


def two_sum(a: float, b: float):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def quick_two_sum(a: float, b: float):
    # requires |a| >= |b|
    s = a + b
    return s, b - (s - a)


def split(a: float):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def two_prod(a: float, b: float):
    p = a * b
    ahi, alo = split(a)
    bhi, blo = split(b)
    return p, ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo


class DDReal:
    """hi + lo with non-overlapping parts."""

    __slots__ = ("hi", "lo")

    def __init__(self, hi: float = 0.0, lo: float = 0.0):
        s, e = two_sum(float(hi), float(lo))
        self.hi = s
        self.lo = e

    @classmethod
    def _raw(cls, hi: float, lo: float) -> "DDReal":
        out = object.__new__(cls)
        out.hi = hi
        out.lo = lo
        return out

    def to_float(self) -> float:
        return self.hi

    def __float__(self) -> float:
        return self.hi

    def __repr__(self) -> str:
        return f"DDReal({self.hi!r}, {self.lo!r})"

    def __neg__(self) -> "DDReal":
        return DDReal._raw(-self.hi, -self.lo)

    def __abs__(self) -> "DDReal":
        return -self if self.hi < 0.0 or (self.hi == 0.0 and self.lo < 0.0) else self

    def _coerce(other):
        if isinstance(other, DDReal):
            return other
        if isinstance(other, (int, float)):
            return DDReal._raw(float(other), 0.0)
        return None

    def __add__(self, other):
        other = DDReal._coerce(other)
        if other is None:
            return NotImplemented
        return dd_add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = DDReal._coerce(other)
        if other is None:
            return NotImplemented
        return dd_sub(self, other)

    def __rsub__(self, other):
        other = DDReal._coerce(other)
        if other is None:
            return NotImplemented
        return dd_sub(other, self)

    def __mul__(self, other):
        other = DDReal._coerce(other)
        if other is None:
            return NotImplemented
        return dd_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = DDReal._coerce(other)
        if other is None:
            return NotImplemented
        return dd_div(self, other)

    def __rtruediv__(self, other):
        other = DDReal._coerce(other)
        if other is None:
            return NotImplemented
        return dd_div(other, self)

    def _cmp(self, other) -> int:
        other = DDReal._coerce(other)
        if self.hi != other.hi:
            return -1 if self.hi < other.hi else 1
        if self.lo != other.lo:
            return -1 if self.lo < other.lo else 1
        return 0

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __eq__(self, other):
        c = DDReal._coerce(other)
        return c is not None and self._cmp(c) == 0

    def __hash__(self):
        return hash((self.hi, self.lo))


def _check_finite(x: DDReal, op: str) -> DDReal:
    if not math.isfinite(x.hi):
        raise OverflowError(f"double-double {op} overflowed")
    return x


def dd_add(a: DDReal, b: DDReal) -> DDReal:
    s1, s2 = two_sum(a.hi, b.hi)
    t1, t2 = two_sum(a.lo, b.lo)
    s2 += t1
    s1, s2 = quick_two_sum(s1, s2)
    s2 += t2
    s1, s2 = quick_two_sum(s1, s2)
    return _check_finite(DDReal._raw(s1, s2), "add")


def dd_sub(a: DDReal, b: DDReal) -> DDReal:
    return dd_add(a, -b)


def dd_mul(a: DDReal, b: DDReal) -> DDReal:
    p, e = two_prod(a.hi, b.hi)
    e += a.hi * b.lo + a.lo * b.hi
    p, e = quick_two_sum(p, e)
    return _check_finite(DDReal._raw(p, e), "mul")


def dd_div(a: DDReal, b: DDReal) -> DDReal:
    if b.hi == 0.0:
        raise ZeroDivisionError("double-double division by zero")
    q1 = a.hi / b.hi
    r = dd_add(a, -dd_mul(b, DDReal._raw(q1, 0.0)))
    q2 = r.hi / b.hi
    r = dd_add(r, -dd_mul(b, DDReal._raw(q2, 0.0)))
    q3 = r.hi / b.hi
    s, e = quick_two_sum(q1, q2)
    e += q3
    s, e = quick_two_sum(s, e)
    return _check_finite(DDReal._raw(s, e), "div")


def dd_sqrt(a: DDReal) -> DDReal:
    if a.hi == 0.0 and a.lo == 0.0:
        return DDReal._raw(0.0, 0.0)
    if a.hi < 0.0:
        raise DomainError(f"square root of negative value {a.hi:.6g}", offenders=(a.hi,))
    x = 1.0 / math.sqrt(a.hi)
    half_x = x * 0.5
    y = DDReal._raw(a.hi * x, 0.0)
    for _ in range(2):  # Karp-Markstein corrections: y += (a - y^2) / (2 sqrt(a))
        err = dd_sub(a, dd_mul(y, y))
        y = dd_add(y, DDReal._raw(err.hi * half_x, err.lo * half_x))
    return y


# ln 2 to double-double precision (checked against mpmath in the tests)
LN2 = DDReal._raw(0.6931471805599453, 2.3190468138462996e-17)

_INV_FACT = []
_fact = 1
for _k in range(2, 18):
    _fact *= _k
    _INV_FACT.append(dd_div(DDReal._raw(1.0, 0.0), DDReal._raw(float(_fact), 0.0)))


def dd_exp(x: DDReal) -> DDReal:
    """exp(x): reduce by ln2 and by 512, series, square back up."""
    if x.hi > 709.0:
        raise OverflowError("double-double exp overflow")
    if x.hi < -709.0:
        return DDReal._raw(0.0, 0.0)
    m = math.floor(x.hi / LN2.hi + 0.5)
    r = dd_add(x, -dd_mul(LN2, DDReal._raw(float(m), 0.0)))
    r = DDReal._raw(r.hi / 512.0, r.lo / 512.0)  # exact scaling by 2^-9
    # p = exp(r) - 1 via the Taylor series
    rsq = dd_mul(r, r)
    p = dd_mul(rsq, _INV_FACT[0])
    term = rsq
    for inv in _INV_FACT[1:]:
        term = dd_mul(term, r)
        contrib = dd_mul(term, inv)
        p = dd_add(p, contrib)
        if abs(contrib.hi) < 1e-35 * (abs(p.hi) + 1e-300):
            break
    p = dd_add(r, p)
    for _ in range(9):  # (1+p)^2 - 1 = 2p + p^2
        p = dd_add(dd_add(p, p), dd_mul(p, p))
    result = dd_add(p, DDReal._raw(1.0, 0.0))
    scale = math.ldexp(1.0, int(m))
    return _check_finite(DDReal._raw(result.hi * scale, result.lo * scale), "exp")


def dd_log(x: DDReal) -> DDReal:
    """log(x) by Newton iteration on exp(y) = x."""
    if x.hi <= 0.0:
        raise DomainError(f"logarithm of non-positive value {x.hi:.6g}", offenders=(x.hi,))
    y = DDReal._raw(math.log(x.hi), 0.0)
    for _ in range(2):
        y = dd_add(dd_add(y, dd_mul(x, dd_exp(-y))), DDReal._raw(-1.0, 0.0))
    return y


def dd_pow(x: DDReal, t: float) -> DDReal:
    """x**t for double exponent t, via exp(t log x)."""
    if t == 0.0:
        return DDReal._raw(1.0, 0.0)
    if t == 1.0:
        return DDReal._raw(x.hi, x.lo)
    if x.hi <= 0.0:
        raise DomainError(f"power of non-positive value {x.hi:.6g}", offenders=(x.hi,))
    return dd_exp(dd_mul(dd_log(x), DDReal._raw(t, 0.0)))


# ---------------------------------------------------------------------------
# Vectorised double-double on (hi, lo) ndarray pairs; all ops broadcast.
# ---------------------------------------------------------------------------

def v_two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def v_quick_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


def v_two_prod(a, b):
    p = a * b
    c = _SPLITTER * a
    ahi = c - (c - a)
    alo = a - ahi
    c = _SPLITTER * b
    bhi = c - (c - b)
    blo = b - bhi
    return p, ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo


def v_add(ah, al, bh, bl):
    s1, s2 = v_two_sum(ah, bh)
    t1, t2 = v_two_sum(al, bl)
    s2 = s2 + t1
    s1, s2 = v_quick_two_sum(s1, s2)
    s2 = s2 + t2
    return v_quick_two_sum(s1, s2)


def v_sub(ah, al, bh, bl):
    return v_add(ah, al, -bh, -bl)


def v_mul(ah, al, bh, bl):
    p, e = v_two_prod(ah, bh)
    e = e + (ah * bl + al * bh)
    return v_quick_two_sum(p, e)


def v_zeros(shape):
    return np.zeros(shape), np.zeros(shape)
