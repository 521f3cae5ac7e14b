"""Figure rendering for the report path.

Every CLI report can drop a PNG next to its CSV.  Rendering is
file-only (Agg backend); nothing here opens a window.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = [
    "save_profile",
    "save_diag",
    "save_scan",
    "save_condition",
    "save_sample",
    "save_theta",
    "save_blocks",
]

_DPI = 150


def _new_axes(nrows=1, ncols=1, height=3.2):
    fig, axes = plt.subplots(nrows, ncols, figsize=(4.2 * ncols, height * nrows))
    return fig, axes


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def save_profile(profile, path) -> None:
    cols = profile.columns(normalized=True)
    fig, (ax0, ax1) = _new_axes(ncols=2)
    ax0.plot(cols["r"], cols["exact"], label="exact", lw=1.4)
    ax0.plot(cols["r"], cols["bessel1"], label="one-term", lw=0.9, ls="--")
    ax0.plot(cols["r"], cols["bessel2"], label="two-term", lw=0.9, ls=":")
    ax0.set_xlabel("|x - y|")
    ax0.set_ylabel(f"e/n^{{{profile.dimension / 2 - 1:g}}}")
    ax0.set_title(f"d={profile.dimension}, n={profile.level}")
    ax0.legend(fontsize=8)
    ax1.semilogy(cols["r"], np.maximum(cols["err1"], 1e-18), label="|exact - one-term|", lw=0.9)
    ax1.semilogy(cols["r"], np.maximum(cols["err2"], 1e-18), label="|exact - two-term|", lw=0.9)
    ax1.set_xlabel("|x - y|")
    ax1.legend(fontsize=8)
    _finish(fig, path)


def save_diag(table, path) -> None:
    fig, ax = _new_axes()
    ax.plot(table.levels, table.exact, ".", ms=2.5, label="e(x,x)")
    ax.plot(table.levels, table.env_lo, lw=0.8, color="C1", label="envelope")
    ax.plot(table.levels, table.env_hi, lw=0.8, color="C1")
    ax.set_xlabel("n")
    ax.set_ylabel("diagonal value")
    ax.set_title(f"d={table.dimension}")
    ax.legend(fontsize=8)
    _finish(fig, path)


def save_scan(scan, path) -> None:
    fig, ax = _new_axes()
    for i, n in enumerate(scan.levels):
        ax.plot(scan.chords, scan.ratios[i], lw=1.0, label=f"n={n}")
    ax.set_xlabel("|x - y|")
    ax.set_ylabel("delta_n n^{d/4} / min(1, sqrt(n) r)")
    ax.set_title(f"d={scan.dimension}")
    ax.legend(fontsize=7)
    _finish(fig, path)


def save_condition(report, path) -> None:
    fig, ax = _new_axes()
    ax.semilogx(report.cutoffs, report.partial_sums, ".-", lw=1.0, label="partial sum")
    finite = np.isfinite(report.upper)
    if finite.any():
        ax.semilogx(report.cutoffs[finite], report.upper[finite], lw=0.8, ls="--", label="upper")
    ax.semilogx(report.cutoffs, report.lower, lw=0.8, ls=":", label="lower")
    ax.set_xlabel("cutoff")
    ax.set_title(f"{report.name}: {report.verdict}")
    ax.legend(fontsize=8)
    _finish(fig, path)


def save_sample(sample, path, max_rows: int = 25) -> None:
    fig, ax = _new_axes()
    k = min(max_rows, sample.draws.shape[0])
    for i in range(k):
        ax.plot(sample.draws[i], lw=0.6, alpha=0.6)
    ax.set_xlabel("grid index")
    ax.set_ylabel("field value")
    ax.set_title(f"{k} of {sample.num_draws} draws (seed {sample.seed})")
    _finish(fig, path)


def save_theta(report, path) -> None:
    fig, ax = _new_axes()
    for t in report.thetas:
        ax.semilogx(report.checkpoints, report.partials[t], ".-", lw=1.0, label=f"theta={t:g}")
    ax.set_xlabel("P")
    ax.set_ylabel("partial sum")
    ax.legend(fontsize=8)
    _finish(fig, path)


def save_blocks(rows, path) -> None:
    fig, ax = _new_axes()
    idx = [r.block for r in rows]
    ax.bar([i - 0.18 for i in idx], [r.mc_sup for r in rows], width=0.36, label="MC E sup")
    ax.bar(
        [i + 0.18 for i in idx],
        [r.theoretical_weight for r in rows],
        width=0.36,
        label="dyadic weight",
    )
    ax.set_xlabel("block")
    ax.set_xticks(idx)
    ax.legend(fontsize=8)
    _finish(fig, path)
