"""Delimited output.

One CSV dialect everywhere: comma separator, LF line endings, values
rendered with 17 significant digits (round-trippable), metadata in
``#``-prefixed comment lines before the header.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .special import normalized_bessel_many
from .spectral import SpectralProfile, spectral_levels
from .geometry import SpherePair, hat_coords
from .util import format_float

__all__ = [
    "write_csv",
    "write_profile",
    "DiagonalTable",
    "diagonal_table",
    "write_diag",
    "write_scan",
    "write_condition",
    "write_sample",
    "write_theta_report",
    "write_blocks",
]


def write_csv(path, header, rows, comments=()) -> None:
    """Write rows of floats/ints under a comma-separated header."""
    with open(path, "w", newline="\n") as fh:
        for line in comments:
            fh.write(f"# {line}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(
                ",".join(
                    str(v)
                    if isinstance(v, (str, int, np.integer))
                    else format_float(v)
                    for v in row
                )
                + "\n"
            )


def write_profile(profile: SpectralProfile, path, normalized: bool = True) -> None:
    """Spectral profile CSV: r, exact, bessel1, bessel2, err1, err2."""
    cols = profile.columns(normalized=normalized)
    comments = [
        f"d={profile.dimension} n={profile.level} radius={format_float(profile.radius)}",
    ]
    if normalized:
        comments.append(
            f"columns scaled by n^(1-d/2) = {format_float(1.0 / profile.normalization)}"
        )
    write_csv(
        path,
        ["r", "exact", "bessel1", "bessel2", "err1", "err2"],
        zip(*(cols[k] for k in ("r", "exact", "bessel1", "bessel2", "err1", "err2"))),
        comments,
    )


@dataclass(frozen=True)
class DiagonalTable:
    """Diagonal values e_{d,n}(x,x) against the constant-term envelope."""

    dimension: int
    levels: np.ndarray
    exact: np.ndarray
    lead: np.ndarray
    env_lo: np.ndarray
    env_hi: np.ndarray


def diagonal_table(d: int, n_lo: int, n_hi: int) -> DiagonalTable:
    """Tabulate diagonal values with the two-term oscillation envelope."""
    if n_lo < 0 or n_hi < n_lo:
        raise ValueError("need 0 <= n_lo <= n_hi")
    levels = spectral_levels(d, hat_coords(SpherePair(d, 0.0)), n_hi)
    ns = np.arange(n_lo, n_hi + 1)
    exact = levels[n_lo:]
    scale = np.ones_like(ns, dtype=float)
    nz = ns > 0
    scale[nz] = ns[nz].astype(float) ** (d / 2.0 - 1.0)
    lead = scale * (2.0 * math.pi) ** (-d / 2.0) * math.exp(-math.lgamma(d / 2.0))
    osc = np.zeros_like(lead)
    osc[nz] = (
        scale[nz]
        * (2.0 * math.pi) ** (-d / 2.0)
        * np.abs(normalized_bessel_many(d, 2.0 * np.sqrt(2.0 * ns[nz].astype(float))))
    )
    return DiagonalTable(
        dimension=d,
        levels=ns,
        exact=exact,
        lead=lead,
        env_lo=lead - osc,
        env_hi=lead + osc,
    )


def write_diag(table: DiagonalTable, path) -> None:
    write_csv(
        path,
        ["n", "exact", "lead", "env_lo", "env_hi"],
        zip(table.levels, table.exact, table.lead, table.env_lo, table.env_hi),
        [f"d={table.dimension}"],
    )


def write_scan(scan, path) -> None:
    """Dudley scan CSV: n, r, delta, ratio."""
    write_csv(
        path,
        ["n", "r", "delta", "ratio"],
        scan.rows(),
        [
            f"d={scan.dimension}",
            f"ratio_min={format_float(scan.ratio_min)} ratio_max={format_float(scan.ratio_max)}",
        ],
    )


def write_condition(report, path) -> None:
    """Condition report CSV: cutoff, lower, upper."""
    write_csv(
        path,
        ["cutoff", "lower", "upper"],
        report.rows(),
        [
            f"condition={report.name} d={report.dimension}",
            f"verdict={report.verdict}",
            f"reason={report.reason}",
        ],
    )


def write_sample(sample, path) -> None:
    """Field draws, one row per draw, seed recorded in the header comment."""
    m = sample.draws.shape[1]
    write_csv(
        path,
        [f"x{i}" for i in range(m)],
        sample.draws,
        [
            f"seed={sample.seed}",
            f"jitter={format_float(sample.jitter)}",
            f"draws={sample.num_draws}",
        ],
    )


def write_theta_report(report, path) -> None:
    """Per-theta partial sums at the checkpoint cutoffs."""
    header = ["p"] + [f"theta_{format_float(t)}" for t in report.thetas]
    rows = []
    for i, p in enumerate(report.checkpoints):
        rows.append([int(p)] + [float(report.partials[t][i]) for t in report.thetas])
    write_csv(
        path,
        header,
        rows,
        [
            f"p_max={report.p_max}",
            f"max_pairwise_ratio={format_float(report.max_pairwise_ratio)}",
            f"identity_ok={report.identity_ok}",
        ],
    )


def write_blocks(rows, path) -> None:
    write_csv(
        path,
        ["block", "n_lo", "n_hi", "mc_sup", "theoretical_weight"],
        ((r.block, r.n_lo, r.n_hi, r.mc_sup, r.theoretical_weight) for r in rows),
    )
