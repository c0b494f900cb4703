"""Figure rendering for sweep and timing reports.

Renders alongside the CSV output: accuracy sweeps plot mean relative error
against whichever parameter varies (size or condition number), with the
u * cond(phi) overlay when it was measured; benchmarks plot median wall
time against size.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

_STYLE = {
    "naive": dict(color="tab:red", marker="o"),
    "sqrt_schur": dict(color="tab:orange", marker="s"),
    "chol_schur": dict(color="tab:blue", marker="^"),
    "chol_schur_pd": dict(color="tab:green", marker="v"),
}


def _line_groups(records):
    groups: dict[str, list] = {}
    for rec in records:
        groups.setdefault(rec.algorithm, []).append(rec)
    return groups


def render_accuracy_figure(records, path) -> None:
    sizes = sorted({r.n for r in records})
    by_size = len(sizes) > 1
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for name, recs in _line_groups(records).items():
        if by_size:
            recs = sorted(recs, key=lambda r: r.n)
            xs = [r.n for r in recs]
        else:
            recs = sorted(recs, key=lambda r: r.cond_a)
            xs = [r.cond_a for r in recs]
        ys = [r.mean_rel_err for r in recs]
        ax.plot(xs, ys, label=name, **_STYLE.get(name, {}))
    overlay = [(r.cond_a if not by_size else r.n, r.u_cond_phi)
               for r in records if not math.isnan(r.u_cond_phi)]
    if overlay:
        seen = dict(sorted(set(overlay)))
        ax.plot(list(seen), list(seen.values()), "k--", label=r"$u\,\mathrm{cond}$")
    ax.set_yscale("log")
    ax.set_xlabel("n" if by_size else "cond(A)")
    if not by_size:
        ax.set_xscale("log")
    ax.set_ylabel("mean relative forward error")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_bench_figure(records, path) -> None:
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for name, recs in _line_groups(records).items():
        recs = sorted(recs, key=lambda r: r.n)
        ax.plot([r.n for r in recs], [r.median_time_s for r in recs],
                label=name, **_STYLE.get(name, {}))
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("n")
    ax.set_ylabel("median wall time [s]")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
