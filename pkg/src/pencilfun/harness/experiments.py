"""Accuracy and timing experiments over seeded random SPD pairs.

Each (n, cond_A, cond_B) cell runs every selected algorithm on the same
matrix pairs; forward errors are measured against the double-double
reference and averaged arithmetically (exact summation, so aggregation is
order-independent).  Failed trials are tallied and excluded rather than
aborting a sweep.  ``PENCILFUN_THREADS`` caps parallel trial workers
(unset or 0 means serial).
"""

from __future__ import annotations

import logging
import math
import os
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from ..algorithms import DEFAULT_VARIANTS, phi
from ..conditioning import cond_phi
from ..errors import PencilFunError
from ..functions import FunctionSpec, builtin, function_label
from ..oracle.reference import reference_phi, relative_error_vs_reference
from ..precision import UNIT_ROUNDOFF
from .generate import spd_pair

log = logging.getLogger(__name__)

CSV_HEADER = "n,cond_A,cond_B,function,algorithm,variant,trials,mean_rel_err,median_time_s,flops,u_cond_phi"


@dataclass
class ExperimentRecord:
    n: int
    cond_a: float
    cond_b: float
    function: str
    algorithm: str
    variant: str
    trials: int
    mean_rel_err: float
    median_time_s: float
    flops: float
    u_cond_phi: float
    failures: int = 0

    def csv_row(self) -> str:
        return ",".join([
            str(self.n),
            f"{self.cond_a:.17g}",
            f"{self.cond_b:.17g}",
            self.function,
            self.algorithm,
            self.variant,
            str(self.trials),
            f"{self.mean_rel_err:.17g}",
            f"{self.median_time_s:.6e}",
            f"{self.flops:.17g}",
            f"{self.u_cond_phi:.17g}",
        ])


def write_records_csv(path, records) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(CSV_HEADER + "\n")
        for rec in records:
            fh.write(rec.csv_row() + "\n")


def _spec_key(spec: FunctionSpec) -> tuple:
    return (spec.name, tuple(sorted(spec.params.items())))


def _spec_from_key(key) -> FunctionSpec:
    name, params = key
    return builtin(name, **dict(params))


def _normalize_algorithms(algorithms) -> list[tuple[str, str]]:
    out = []
    for item in algorithms:
        if isinstance(item, str):
            name, variant = item, DEFAULT_VARIANTS[item]
        else:
            name, variant = item
            if variant is None:
                variant = DEFAULT_VARIANTS[name]
        out.append((name, variant))
    return out


@dataclass
class SweepConfig:
    sizes: list[int]
    cond_pairs: list[tuple[float, float]]
    function: FunctionSpec
    algorithms: list = field(default_factory=lambda: list(DEFAULT_VARIANTS))
    trials: int = 20
    seed: int = 0
    with_cond: bool = False


@dataclass
class BenchConfig:
    sizes: list[int]
    function: FunctionSpec
    algorithms: list = field(default_factory=lambda: list(DEFAULT_VARIANTS))
    trials: int = 5
    seed: int = 0
    cond_a: float = 10.0
    cond_b: float = 10.0


def _worker_count() -> int:
    raw = os.environ.get("PENCILFUN_THREADS", "")
    try:
        return max(int(raw), 0) if raw else 0
    except ValueError:
        return 0


def _map_trials(fn, payloads):
    workers = _worker_count()
    if workers <= 0:
        return [fn(p) for p in payloads]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, payloads))


def _accuracy_trial(payload):
    """One (cell, trial): every algorithm against the shared reference."""
    (n, cond_a, cond_b, spec_key, algorithms, seed, index, with_cond) = payload
    spec = _spec_from_key(spec_key)
    A, B = spd_pair(n, cond_a, cond_b, seed, index)
    out = {"errors": {}, "times": {}, "flops": {}, "cond": math.nan}
    try:
        ref = reference_phi(A, B, spec)
    except PencilFunError as exc:
        log.warning("reference failed at n=%d cond=(%g, %g) trial %d: %s",
                    n, cond_a, cond_b, index, exc)
        return out
    for name, variant in algorithms:
        try:
            result = phi(A, B, spec, algorithm=name, variant=variant)
        except PencilFunError as exc:
            log.warning("%s/%s failed at n=%d cond=(%g, %g) trial %d: %s",
                        name, variant, n, cond_a, cond_b, index, exc)
            out["errors"][(name, variant)] = math.nan
            continue
        out["errors"][(name, variant)] = relative_error_vs_reference(result.s5.a, ref)
        out["times"][(name, variant)] = result.wall_time
        out["flops"][(name, variant)] = result.flops.formula
    if with_cond:
        try:
            out["cond"] = cond_phi(A, B, spec).cond_phi
        except PencilFunError as exc:
            log.warning("cond failed at n=%d cond=(%g, %g) trial %d: %s",
                        n, cond_a, cond_b, index, exc)
    return out


def accuracy_sweep(config: SweepConfig) -> list[ExperimentRecord]:
    algorithms = _normalize_algorithms(config.algorithms)
    spec_key = _spec_key(config.function)
    label = function_label(config.function)
    records = []
    for n in config.sizes:
        for cond_a, cond_b in config.cond_pairs:
            payloads = [
                (n, cond_a, cond_b, spec_key, algorithms, config.seed, t, config.with_cond)
                for t in range(config.trials)
            ]
            results = _map_trials(_accuracy_trial, payloads)
            conds = [r["cond"] for r in results if not math.isnan(r["cond"])]
            u_cond = UNIT_ROUNDOFF * math.fsum(conds) / len(conds) if conds else math.nan
            for name, variant in algorithms:
                errs = [r["errors"].get((name, variant), math.nan) for r in results]
                good = [e for e in errs if not math.isnan(e)]
                times = [r["times"][(name, variant)] for r in results
                         if (name, variant) in r["times"]]
                flops = next((r["flops"][(name, variant)] for r in results
                              if (name, variant) in r["flops"]), math.nan)
                records.append(ExperimentRecord(
                    n=n,
                    cond_a=cond_a,
                    cond_b=cond_b,
                    function=label,
                    algorithm=name,
                    variant=variant,
                    trials=config.trials,
                    mean_rel_err=math.fsum(good) / len(good) if good else math.nan,
                    median_time_s=statistics.median(times) if times else math.nan,
                    flops=flops,
                    u_cond_phi=u_cond,
                    failures=config.trials - len(good),
                ))
    return records


def bench(config: BenchConfig) -> list[ExperimentRecord]:
    """Median wall time per algorithm per size; formula flop totals attached."""
    algorithms = _normalize_algorithms(config.algorithms)
    label = function_label(config.function)
    records = []
    for n in config.sizes:
        pairs = [spd_pair(n, config.cond_a, config.cond_b, config.seed, t)
                 for t in range(config.trials)]
        for name, variant in algorithms:
            phi(pairs[0][0], pairs[0][1], config.function,
                algorithm=name, variant=variant)  # warm-up, discarded
            times = []
            flops = math.nan
            failures = 0
            for A, B in pairs:
                t0 = time.perf_counter()
                try:
                    result = phi(A, B, config.function, algorithm=name, variant=variant)
                except PencilFunError as exc:
                    log.warning("%s/%s failed during bench at n=%d: %s",
                                name, variant, n, exc)
                    failures += 1
                    continue
                times.append(time.perf_counter() - t0)
                flops = result.flops.formula
            records.append(ExperimentRecord(
                n=n,
                cond_a=config.cond_a,
                cond_b=config.cond_b,
                function=label,
                algorithm=name,
                variant=variant,
                trials=config.trials,
                mean_rel_err=math.nan,
                median_time_s=statistics.median(times) if times else math.nan,
                flops=flops,
                u_cond_phi=math.nan,
                failures=failures,
            ))
    return records
