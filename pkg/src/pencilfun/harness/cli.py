"""Command-line harness.

Subcommands: ``compute`` (one evaluation between matrix files), ``gen``
(write random SPD test matrices), ``accuracy`` (error sweep against the
extended-precision reference), ``bench`` (timing medians), ``cond``
(condition number and bounds).  Exit codes: 0 success, 1 input error,
2 numerical failure.
"""

from __future__ import annotations

import argparse
import sys

from ..algorithms import ALGORITHMS, DEFAULT_VARIANTS, VARIANTS, phi
from ..conditioning import cond_phi
from ..errors import PencilFunError, ParseError, ShapeError, BadParameter, UnknownFunction
from ..functions import parse_function
from ..types import SymMatrix
from .experiments import BenchConfig, SweepConfig, accuracy_sweep, bench, write_records_csv
from .generate import GenSpec, gen_spd
from .mmio import read_matrix, write_matrix

_INPUT_ERRORS = (ParseError, ShapeError, BadParameter, UnknownFunction,
                 OSError, ValueError)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(1)


def _int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok]


def _float_list(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok]


def _algorithm_list(text: str) -> list[tuple[str, str | None]]:
    out = []
    for tok in text.split(","):
        if not tok:
            continue
        name, _, variant = tok.partition(":")
        if name not in ALGORITHMS:
            raise argparse.ArgumentTypeError(
                f"unknown algorithm {name!r}; available: {', '.join(ALGORITHMS)}"
            )
        if variant and variant not in VARIANTS[name]:
            raise argparse.ArgumentTypeError(
                f"unknown variant {variant!r} for {name}; "
                f"available: {', '.join(VARIANTS[name])}"
            )
        out.append((name, variant or None))
    if not out:
        raise argparse.ArgumentTypeError("empty algorithm list")
    return out


def _build_parser() -> _Parser:
    parser = _Parser(prog="pencilfun",
                     description="Matrix functions of symmetric definite pencils.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="base RNG seed")
    common.add_argument("--trials", type=int, default=None,
                        help="trials per configuration")
    common.add_argument("--csv", default=None, help="write results to this CSV file")

    p = sub.add_parser("compute", parents=[common],
                       help="compute A f(A^{-1}B) from matrix files")
    p.add_argument("-A", required=True, help="Matrix Market file for A")
    p.add_argument("-B", required=True, help="Matrix Market file for B")
    p.add_argument("--function", default="log", help="e.g. log, sqrt, power:t=0.5")
    p.add_argument("--algorithm", default="chol_schur", choices=ALGORITHMS)
    p.add_argument("--variant", default=None)
    p.add_argument("-o", "--out", required=True, help="output Matrix Market file")

    p = sub.add_parser("gen", parents=[common],
                       help="generate seeded random SPD matrices")
    p.add_argument("-n", type=int, required=True, help="dimension")
    p.add_argument("--cnd", type=float, default=10.0, help="target condition number")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("-o", "--out", required=True,
                   help="output file (suffix _### added when count > 1)")

    p = sub.add_parser("accuracy", parents=[common],
                       help="forward-error sweep against the extended-precision reference")
    p.add_argument("--sizes", type=_int_list, default=[10])
    p.add_argument("--cond-a", type=_float_list, default=[1e7])
    p.add_argument("--cond-b", type=_float_list, default=[10.0],
                   help="single value, or one per --cond-a entry")
    p.add_argument("--function", default="log")
    p.add_argument("--algorithms", type=_algorithm_list,
                   default=[(a, None) for a in ALGORITHMS])
    p.add_argument("--with-cond", action="store_true",
                   help="also evaluate u * cond(phi; A, B)")
    p.add_argument("--plot", action="store_true",
                   help="render a figure next to the CSV output")

    p = sub.add_parser("bench", parents=[common], help="timing medians per size")
    p.add_argument("--sizes", type=_int_list, default=[100, 200])
    p.add_argument("--cnd-a", type=float, default=10.0)
    p.add_argument("--cnd-b", type=float, default=10.0)
    p.add_argument("--function", default="log")
    p.add_argument("--algorithms", type=_algorithm_list,
                   default=[(a, None) for a in ALGORITHMS])
    p.add_argument("--plot", action="store_true",
                   help="render a figure next to the CSV output")

    p = sub.add_parser("cond", parents=[common],
                       help="condition number, derivative-norm bounds, psi")
    p.add_argument("-A", required=True)
    p.add_argument("-B", required=True)
    p.add_argument("--function", default="log")

    return parser


def _load(path: str) -> SymMatrix:
    return read_matrix(path)


def _cmd_compute(args) -> int:
    spec = parse_function(args.function)
    A = _load(args.A)
    B = _load(args.B)
    result = phi(A, B, spec, algorithm=args.algorithm, variant=args.variant)
    write_matrix(args.out, result.s5)
    lam = result.eigenvalues
    print(f"{result.algorithm}/{result.variant}: n={A.n} "
          f"spectrum [{lam[0]:.6g}, {lam[-1]:.6g}] "
          f"flops={result.flops.formula:.3g} time={result.wall_time:.3g}s -> {args.out}")
    return 0


def _cmd_gen(args) -> int:
    spec = GenSpec(n=args.n, cnd=args.cnd, seed=args.seed, count=args.count)
    mats = gen_spd(spec)
    if args.count == 1:
        write_matrix(args.out, mats[0])
        print(f"wrote {args.out}")
        return 0
    stem, dot, ext = args.out.rpartition(".")
    if not dot:
        stem, ext = args.out, "mtx"
    for i, m in enumerate(mats):
        path = f"{stem}_{i:03d}.{ext}"
        write_matrix(path, m)
        print(f"wrote {path}")
    return 0


def _fig_path(csv_path: str) -> str:
    stem, dot, _ = csv_path.rpartition(".")
    return (stem if dot else csv_path) + ".png"


def _cmd_accuracy(args) -> int:
    spec = parse_function(args.function)
    cond_b = args.cond_b
    if len(cond_b) == 1:
        cond_b = cond_b * len(args.cond_a)
    if len(cond_b) != len(args.cond_a):
        raise BadParameter("--cond-b needs one value, or one per --cond-a entry")
    config = SweepConfig(
        sizes=args.sizes,
        cond_pairs=list(zip(args.cond_a, cond_b)),
        function=spec,
        algorithms=args.algorithms,
        trials=args.trials if args.trials is not None else 20,
        seed=args.seed,
        with_cond=args.with_cond,
    )
    records = accuracy_sweep(config)
    _emit(records, args, kind="accuracy")
    return 0


def _cmd_bench(args) -> int:
    spec = parse_function(args.function)
    config = BenchConfig(
        sizes=args.sizes,
        function=spec,
        algorithms=args.algorithms,
        trials=args.trials if args.trials is not None else 5,
        seed=args.seed,
        cond_a=args.cnd_a,
        cond_b=args.cnd_b,
    )
    records = bench(config)
    _emit(records, args, kind="bench")
    return 0


def _emit(records, args, kind: str) -> None:
    from .experiments import CSV_HEADER

    if args.csv:
        write_records_csv(args.csv, records)
        print(f"wrote {args.csv} ({len(records)} rows)")
        if getattr(args, "plot", False):
            from . import plots

            path = _fig_path(args.csv)
            if kind == "bench":
                plots.render_bench_figure(records, path)
            else:
                plots.render_accuracy_figure(records, path)
            print(f"wrote {path}")
    else:
        print(CSV_HEADER)
        for rec in records:
            print(rec.csv_row())


def _cmd_cond(args) -> int:
    spec = parse_function(args.function)
    report = cond_phi(_load(args.A), _load(args.B), spec)
    print(f"cond_phi      = {report.cond_phi:.12g}")
    print(f"dphi_norm     = {report.dphi_norm:.12g}")
    print(f"bound_lemma3  = {report.bound_lemma3:.12g}")
    print(f"bound_eq14    = {report.bound_eq14:.12g}")
    print(f"mu_A          = {report.mu_A:.12g}")
    print(f"mu_B          = {report.mu_B:.12g}")
    print(f"psi_RA        = {report.psi_RA:.12g}")
    return 0


_COMMANDS = {
    "compute": _cmd_compute,
    "gen": _cmd_gen,
    "accuracy": _cmd_accuracy,
    "bench": _cmd_bench,
    "cond": _cmd_cond,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except _INPUT_ERRORS as exc:
        print(f"pencilfun: input error: {exc}", file=sys.stderr)
        return 1
    except PencilFunError as exc:
        print(f"pencilfun: numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
