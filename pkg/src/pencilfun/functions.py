"""Scalar function registry: f, derivatives, duals, divided differences.

Every function carries its dual fhat(x) = x f(1/x) in closed form, so the
dual of a dual is the original function exactly.  Divided differences use
cancellation-free closed forms where one exists and fall back to the
midpoint derivative inside the near-confluence window |y - x| <=
sqrt(u) max(|x|, |y|).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import BadParameter, DomainError, UnknownFunction
from .precision import SQRT_UNIT_ROUNDOFF
from .oracle import ddreal as dd


@dataclass(frozen=True)
class FunctionSpec:
    """A scalar function with everything the algorithms need to apply it.

    ``f``/``fprime`` accept floats or ndarrays.  ``fsecond`` documents the
    smoothness assumption and may be absent.  ``stable_dd(x, y)`` is a
    cancellation-free divided difference for x != y, when one exists.
    ``dd_eval`` maps a double-double scalar through f for the oracle.
    """

    name: str
    f: Callable
    fprime: Callable
    domain: tuple[float, float]
    fsecond: Callable | None = None
    params: dict = field(default_factory=dict)
    dd_eval: Callable | None = None
    stable_dd: Callable | None = None
    dual_factory: Callable[[], "FunctionSpec"] | None = None

    def dual(self) -> "FunctionSpec":
        """The dual function fhat(x) = x f(1/x), as a full FunctionSpec."""
        if self.dual_factory is None:
            raise UnknownFunction(f"{self.name} has no registered dual")
        return self.dual_factory()

    def fhat(self, x):
        return self.dual().f(x)

    def fhat_prime(self, x):
        return self.dual().fprime(x)

    def contains(self, x: float) -> bool:
        return self.domain[0] < x < self.domain[1]

    def check_domain(self, values) -> None:
        vals = np.atleast_1d(np.asarray(values, dtype=float))
        lo, hi = self.domain
        bad = vals[~((vals > lo) & (vals < hi))]
        if bad.size:
            raise DomainError(
                f"{bad.size} value(s) outside the domain ({lo:g}, {hi:g}) "
                f"of {self.name}: worst {bad[np.argmax(np.abs(bad - np.clip(bad, lo, hi)))]:.6g}",
                offenders=bad.tolist(),
            )


@dataclass
class DividedDifferenceTable:
    """F[i, j] = f[lambda_i, lambda_j]; diagonal is f'(lambda_i)."""

    lam: np.ndarray
    F: np.ndarray


def divided_difference(spec: FunctionSpec, x: float, y: float) -> float:
    """First divided difference f[x, y] with a confluent fallback."""
    spec.check_domain((x, y))
    if abs(y - x) <= SQRT_UNIT_ROUNDOFF * max(abs(x), abs(y)):
        return float(spec.fprime((x + y) / 2.0))
    if spec.stable_dd is not None:
        return float(spec.stable_dd(x, y))
    return float((spec.f(y) - spec.f(x)) / (y - x))


def dd_table(spec: FunctionSpec, lam) -> DividedDifferenceTable:
    lam = np.asarray(lam, dtype=float)
    lo, hi = spec.domain
    for idx, v in enumerate(lam):
        if not (lo < v < hi):
            raise DomainError(
                f"eigenvalue {idx + 1} = {v:.6g} outside the domain of {spec.name}",
                offenders=(v,),
            )
    n = lam.shape[0]
    F = np.empty((n, n))
    for i in range(n):
        F[i, i] = spec.fprime(lam[i])
        for j in range(i + 1, n):
            F[i, j] = F[j, i] = divided_difference(spec, lam[i], lam[j])
    return DividedDifferenceTable(lam=lam, F=F)


# ---------------------------------------------------------------------------
# Builtins
# ---------------------------------------------------------------------------

_POS = (0.0, math.inf)
_REAL = (-math.inf, math.inf)


def _check_t(t: float) -> float:
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise BadParameter(f"weight t must lie in [0, 1], got {t}")
    return t


def _log_spec() -> FunctionSpec:
    def stable(x, y):
        h = y - x
        if abs(h) <= 0.5 * abs(x):
            return math.log1p(h / x) / h
        return (math.log(y) - math.log(x)) / h

    return FunctionSpec(
        name="log",
        f=np.log,
        fprime=lambda x: 1.0 / x,
        fsecond=lambda x: -1.0 / (x * x),
        domain=_POS,
        dd_eval=dd.dd_log,
        stable_dd=stable,
        dual_factory=_neg_xlogx_spec,
    )


def _neg_xlogx_spec() -> FunctionSpec:
    # dual of log: x * log(1/x) = -x log x
    return FunctionSpec(
        name="neg_xlogx",
        f=lambda x: -x * np.log(x),
        fprime=lambda x: -np.log(x) - 1.0,
        fsecond=lambda x: -1.0 / x,
        domain=_POS,
        dd_eval=lambda v: -(v * dd.dd_log(v)),
        dual_factory=_log_spec,
    )


def _identity_spec() -> FunctionSpec:
    return FunctionSpec(
        name="identity",
        f=lambda x: np.asarray(x, dtype=float) + 0.0 if np.ndim(x) else float(x),
        fprime=lambda x: np.ones_like(np.asarray(x, dtype=float)) if np.ndim(x) else 1.0,
        fsecond=lambda x: np.zeros_like(np.asarray(x, dtype=float)) if np.ndim(x) else 0.0,
        domain=_REAL,
        dd_eval=lambda v: v,
        stable_dd=lambda x, y: 1.0,
        dual_factory=_constant_one_spec,
    )


def _constant_one_spec() -> FunctionSpec:
    return FunctionSpec(
        name="constant_one",
        f=lambda x: np.ones_like(np.asarray(x, dtype=float)) if np.ndim(x) else 1.0,
        fprime=lambda x: np.zeros_like(np.asarray(x, dtype=float)) if np.ndim(x) else 0.0,
        fsecond=lambda x: np.zeros_like(np.asarray(x, dtype=float)) if np.ndim(x) else 0.0,
        domain=_REAL,
        dd_eval=lambda v: dd.DDReal(1.0),
        stable_dd=lambda x, y: 0.0,
        dual_factory=_identity_spec,
    )


def _sqrt_spec() -> FunctionSpec:
    return FunctionSpec(
        name="sqrt",
        f=np.sqrt,
        fprime=lambda x: 0.5 / np.sqrt(x),
        fsecond=lambda x: -0.25 * x ** -1.5,
        domain=_POS,
        dd_eval=dd.dd_sqrt,
        stable_dd=lambda x, y: 1.0 / (math.sqrt(x) + math.sqrt(y)),
        dual_factory=_sqrt_spec,
    )


def _power_spec(t: float) -> FunctionSpec:
    t = _check_t(t)

    def stable(x, y):
        h = y - x
        if abs(h) <= 0.5 * abs(x):
            return x ** t * math.expm1(t * math.log1p(h / x)) / h
        return (y ** t - x ** t) / h

    return FunctionSpec(
        name="power_t",
        f=lambda x: x ** t,
        fprime=lambda x: t * x ** (t - 1.0),
        fsecond=lambda x: t * (t - 1.0) * x ** (t - 2.0),
        domain=_POS,
        params={"t": t},
        dd_eval=lambda v: dd.dd_pow(v, t),
        stable_dd=stable,
        dual_factory=lambda: _power_spec(1.0 - t),
    )


def _arith_mean_spec(t: float) -> FunctionSpec:
    t = _check_t(t)
    return FunctionSpec(
        name="arith_mean_t",
        f=lambda x: ((1.0 - t) + t * x) / 2.0,
        fprime=lambda x: np.full_like(np.asarray(x, dtype=float), t / 2.0) if np.ndim(x) else t / 2.0,
        fsecond=lambda x: np.zeros_like(np.asarray(x, dtype=float)) if np.ndim(x) else 0.0,
        domain=_REAL,
        params={"t": t},
        dd_eval=lambda v: (dd.DDReal(1.0 - t) + v * t) * 0.5,
        stable_dd=lambda x, y: t / 2.0,
        dual_factory=lambda: _arith_mean_spec(1.0 - t),
    )


def _harm_mean_spec() -> FunctionSpec:
    return FunctionSpec(
        name="harm_mean",
        f=lambda x: 2.0 * x / (1.0 + x),
        fprime=lambda x: 2.0 / (1.0 + x) ** 2,
        fsecond=lambda x: -4.0 / (1.0 + x) ** 3,
        domain=_POS,
        dd_eval=lambda v: (v * 2.0) / (v + 1.0),
        stable_dd=lambda x, y: 2.0 / ((1.0 + x) * (1.0 + y)),
        dual_factory=_harm_mean_spec,
    )


def _power_mean_spec(p: float, t: float) -> FunctionSpec:
    t = _check_t(t)
    p = float(p)
    if p == 0.0:
        raise BadParameter("power-mean exponent p must be nonzero")

    def g(x):
        return (1.0 - t) + t * x ** p

    return FunctionSpec(
        name="power_mean_p_t",
        f=lambda x: g(x) ** (1.0 / p),
        fprime=lambda x: t * x ** (p - 1.0) * g(x) ** (1.0 / p - 1.0),
        fsecond=lambda x: t * (1.0 - t) * (p - 1.0) * x ** (p - 2.0) * g(x) ** (1.0 / p - 2.0),
        domain=_POS,
        params={"p": p, "t": t},
        dd_eval=lambda v: dd.dd_pow(dd.dd_pow(v, p) * t + (1.0 - t), 1.0 / p),
        dual_factory=lambda: _power_mean_spec(p, 1.0 - t),
    )


def _exp_spec() -> FunctionSpec:
    def stable(x, y):
        h = y - x
        if abs(h) <= 0.5:
            return math.exp(x) * math.expm1(h) / h
        return (math.exp(y) - math.exp(x)) / h

    return FunctionSpec(
        name="exp",
        f=np.exp,
        fprime=np.exp,
        fsecond=np.exp,
        domain=_REAL,
        dd_eval=dd.dd_exp,
        stable_dd=stable,
        dual_factory=_x_exp_inv_spec,
    )


def _x_exp_inv_spec() -> FunctionSpec:
    # dual of exp by the definition fhat(x) = x f(1/x) = x e^{1/x}
    return FunctionSpec(
        name="x_exp_inv",
        f=lambda x: x * np.exp(1.0 / x),
        fprime=lambda x: np.exp(1.0 / x) * (x - 1.0) / x,
        fsecond=lambda x: np.exp(1.0 / x) / x ** 3,
        domain=_POS,
        dd_eval=lambda v: v * dd.dd_exp(dd.DDReal(1.0) / v),
        dual_factory=_exp_spec,
    )


_BUILTINS = {
    "log": lambda params: _log_spec(),
    "power_t": lambda params: _power_spec(params.get("t", 0.5)),
    "sqrt": lambda params: _sqrt_spec(),
    "arith_mean_t": lambda params: _arith_mean_spec(params.get("t", 0.5)),
    "harm_mean": lambda params: _harm_mean_spec(),
    "power_mean_p_t": lambda params: _power_mean_spec(params.get("p", 1.0), params.get("t", 0.5)),
    "exp": lambda params: _exp_spec(),
    "identity": lambda params: _identity_spec(),
    "constant_one": lambda params: _constant_one_spec(),
}


def builtin(name: str, **params) -> FunctionSpec:
    """Look up a registry function by its canonical name."""
    try:
        factory = _BUILTINS[name]
    except KeyError:
        raise UnknownFunction(
            f"unknown function {name!r}; available: {', '.join(sorted(_BUILTINS))}"
        ) from None
    return factory(params)


_CLI_ALIASES = {
    "log": "log",
    "power": "power_t",
    "power_t": "power_t",
    "sqrt": "sqrt",
    "arith": "arith_mean_t",
    "arith_mean_t": "arith_mean_t",
    "harmonic": "harm_mean",
    "harm_mean": "harm_mean",
    "power_mean": "power_mean_p_t",
    "power_mean_p_t": "power_mean_p_t",
    "exp": "exp",
    "identity": "identity",
    "one": "constant_one",
    "constant_one": "constant_one",
}


def parse_function(text: str) -> FunctionSpec:
    """Parse a CLI function string such as ``log`` or ``power:t=0.5``."""
    head, _, tail = text.partition(":")
    head = head.strip().lower()
    if head not in _CLI_ALIASES:
        raise UnknownFunction(
            f"unknown function {text!r}; available: {', '.join(sorted(set(_CLI_ALIASES)))}"
        )
    params = {}
    if tail:
        for item in tail.split(","):
            key, _, val = item.partition("=")
            if not val:
                raise BadParameter(f"malformed parameter {item!r} in {text!r}")
            try:
                params[key.strip()] = float(val)
            except ValueError:
                raise BadParameter(f"non-numeric parameter {item!r} in {text!r}") from None
    return builtin(_CLI_ALIASES[head], **params)


def function_label(spec: FunctionSpec) -> str:
    """Short display name including parameters, e.g. ``power:t=0.3``."""
    if spec.name == "power_t":
        return f"power:t={spec.params['t']:g}"
    if spec.name == "arith_mean_t":
        return f"arith:t={spec.params['t']:g}"
    if spec.name == "power_mean_p_t":
        return f"power_mean:p={spec.params['p']:g},t={spec.params['t']:g}"
    return spec.name
