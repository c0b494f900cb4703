"""Experiment harness: SPD generation, sweeps, timing, file I/O, figures."""

from .generate import GenSpec, gen_spd, random_spd, trial_seed
from .mmio import read_matrix, write_matrix
from .experiments import (
    BenchConfig,
    CSV_HEADER,
    ExperimentRecord,
    SweepConfig,
    accuracy_sweep,
    bench,
    write_records_csv,
)

__all__ = [
    "BenchConfig",
    "CSV_HEADER",
    "ExperimentRecord",
    "GenSpec",
    "SweepConfig",
    "accuracy_sweep",
    "bench",
    "gen_spd",
    "random_spd",
    "read_matrix",
    "trial_seed",
    "write_matrix",
    "write_records_csv",
]
