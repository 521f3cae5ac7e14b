"""Command-line entry point.

Subcommands: profile, diag, dudley, szcheck, entropy, sample, verify.
Every command writes CSV (and, unless --no-figures, a PNG alongside),
prints one machine-readable line per embedded check:

    RESULT <criterion-id> PASS|FAIL <value>

and exits 0 iff all its checks pass.  Computation errors exit 1; usage
errors exit 2.  The environment variable OSCHARM_THREADS caps the
worker count used by grid scans and covariance assembly.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import figures, report
from .conditions import (
    CoefficientSequence,
    entropic_integral,
    lp_condition,
    sz_condition,
    theta_independence_report,
)
from .dudley import dudley_scan
from .sampler import arc_grid, field_covariance, sample_field, sup_norm_partial_sums
from .spectral import profile as spectral_profile
from .util import format_float
from .verify import (
    contraction_factor,
    euler_maclaurin_check,
    fit_exponent,
    j0_band,
    osc_integral_many,
    prop14_suite,
)

__all__ = ["RunConfig", "main"]


@dataclass
class RunConfig:
    """Validated run parameters shared by the subcommands."""

    command: str
    d: int = 2
    n: int = 150
    n_list: tuple = ()
    grid_count: int = 201
    r_min: float = 0.0
    r_max: float = 1.0
    radius: float = 1.0
    coeffs: CoefficientSequence | None = None
    thetas: tuple = (0.5, 1.0, 2.0)
    p: float | None = None
    p_max: int = 10_000
    l_max: int = 100_000
    points: int = 10
    draws: int = 20_000
    n_sum: int = 200
    blocks: int = 0
    seed: int = 1
    out: Path = Path(".")
    figures: bool = True
    suite: str = "all"
    checks: list = field(default_factory=list)

    def check(self, criterion: str, passed: bool, value: float) -> None:
        self.checks.append((criterion, bool(passed), float(value)))
        print(f"RESULT {criterion} {'PASS' if passed else 'FAIL'} {format_float(value)}")

    @property
    def all_passed(self) -> bool:
        return all(ok for (_, ok, _) in self.checks)


def _parse_law(text: str) -> CoefficientSequence:
    """Parse 'a=0.5,b=1.5[,n0=2]' into a power-log coefficient law."""
    fields = {}
    for part in text.split(","):
        key, _, val = part.partition("=")
        key = key.strip()
        if key not in ("a", "b", "n0") or not val:
            raise argparse.ArgumentTypeError(
                f"law must look like 'a=0.5,b=1.5,n0=2', got {text!r}"
            )
        fields[key] = float(val) if key != "n0" else int(val)
    if "a" not in fields:
        raise argparse.ArgumentTypeError("law needs at least the exponent a")
    return CoefficientSequence.power_log(
        a=fields["a"], b=fields.get("b", 0.0), n0=fields.get("n0", 1)
    )


def _load_coeff_file(path: str) -> CoefficientSequence:
    """Explicit coefficients from a CSV of 'n,c' lines (# comments allowed)."""
    pairs = []
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#") or line.lower().startswith("n,"):
                continue
            n_txt, _, c_txt = line.partition(",")
            pairs.append((int(n_txt), float(c_txt)))
    if not pairs:
        raise ValueError(f"no coefficients found in {path}")
    n_hi = max(n for n, _ in pairs)
    values = np.zeros(n_hi)
    for n, c in pairs:
        if n < 1:
            raise ValueError("coefficient indices start at n = 1")
        values[n - 1] = c
    return CoefficientSequence.explicit(values)


def _coeffs_from_args(args) -> CoefficientSequence:
    if getattr(args, "coeff_file", None):
        return _load_coeff_file(args.coeff_file)
    if getattr(args, "law", None):
        return args.law
    # documented default: c(n) = 1/n
    return CoefficientSequence.power_log(a=1.0, b=0.0, n0=1)


def _add_common(sub, *, law_default="a=1,b=0,n0=1"):
    sub.add_argument("--out", type=Path, default=Path("."), help="output directory (default: %(default)s)")
    sub.add_argument(
        "--figures",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="render a PNG alongside each CSV (default: %(default)s)",
    )
    sub.add_argument(
        "--law",
        type=_parse_law,
        default=None,
        help=f"coefficient law 'a=A,b=B,n0=N0' meaning c(n)=n^-A log(n+1)^-B for n>=N0 (default: {law_default})",
    )
    sub.add_argument("--coeff-file", default=None, help="CSV of explicit coefficients 'n,c' (overrides --law)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oscharm",
        description="Spectral function of the isotropic harmonic oscillator: profiles, "
        "Dudley scans, convergence conditions, Gaussian sampling and asymptotic checks.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("profile", help="tabulate e_{d,n} against chord distance")
    p.add_argument("--d", type=int, default=3, help="ambient dimension (default: %(default)s)")
    p.add_argument("--n", type=int, default=150, help="eigenvalue index (default: %(default)s)")
    p.add_argument("--r-count", type=int, default=201, help="grid size on [0, r-max] (default: %(default)s)")
    p.add_argument("--r-max", type=float, default=1.0, help="largest chord distance (default: %(default)s)")
    p.add_argument("--radius", type=float, default=1.0, help="sphere radius (default: %(default)s)")
    _add_common(p)

    p = subs.add_parser("diag", help="diagonal values e_{d,n}(x,x) with their envelope")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--n-min", type=int, default=1, help="first level (default: %(default)s)")
    p.add_argument("--n-max", type=int, default=400, help="last level (default: %(default)s)")
    _add_common(p)

    p = subs.add_parser("dudley", help="two-sided pseudo-distance ratio scan")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--n-list", default="64,128,256,512", help="comma-separated levels (default: %(default)s)")
    p.add_argument("--r-min", type=float, default=0.02)
    p.add_argument("--r-max", type=float, default=1.0)
    p.add_argument("--r-count", type=int, default=40)
    _add_common(p)

    p = subs.add_parser("szcheck", help="uniform-convergence / L^p condition verdicts")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--p", type=float, default=None, help="run the L^p condition instead (p >= 1)")
    p.add_argument("--l-max", type=int, default=100_000, help="outer cutoff (default: %(default)s)")
    _add_common(p, law_default="a=1,b=0,n0=1")

    p = subs.add_parser("entropy", help="entropic integral and theta-independence sums")
    p.add_argument("--theta", type=float, action="append", default=None,
                   help="theta value (repeatable; default: 0.5 1 2)")
    p.add_argument("--p-max", type=int, default=10_000)
    _add_common(p, law_default="a=1.5,b=0,n0=1")

    p = subs.add_parser("sample", help="joint Gaussian draws of the random series")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--points", type=int, default=10, help="arc grid size (default: %(default)s)")
    p.add_argument("--draws", type=int, default=20_000)
    p.add_argument("--n-sum", type=int, default=200, help="series truncation (default: %(default)s)")
    p.add_argument("--blocks", type=int, default=0, help="also emit block sup statistics for this many blocks")
    p.add_argument("--seed", type=int, default=1)
    _add_common(p)

    p = subs.add_parser("verify", help="asymptotics verification suites")
    p.add_argument("--suite", choices=("prop14", "dudley", "j0band", "oscint", "euler", "all"),
                   default="all")
    p.add_argument("--d", type=int, default=3)
    _add_common(p)

    return parser


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_profile(cfg: RunConfig) -> None:
    grid = np.linspace(cfg.r_min, cfg.r_max, cfg.grid_count)
    prof = spectral_profile(cfg.d, cfg.n, grid, radius=cfg.radius)
    base = f"profile_d{cfg.d}_n{cfg.n}"
    report.write_profile(prof, cfg.out / f"{base}.csv")
    if cfg.figures:
        figures.save_profile(prof, cfg.out / f"{base}.png")
    finite = all(
        np.all(np.isfinite(col)) for col in (prof.exact, prof.bessel1, prof.bessel2)
    )
    cfg.check("PROFILE-FINITE", finite, 1.0 if finite else 0.0)
    if cfg.n >= 30:
        e1 = float(np.max(prof.err1))
        e2 = float(np.max(prof.err2))
        cfg.check("PROFILE-TWOTERM", e2 <= e1 * (1.0 + 1e-9), e2 / e1 if e1 else 0.0)


def cmd_diag(cfg: RunConfig) -> None:
    table = report.diagonal_table(cfg.d, cfg.n_list[0], cfg.n_list[1])
    base = f"diag_d{cfg.d}"
    report.write_diag(table, cfg.out / f"{base}.csv")
    if cfg.figures:
        figures.save_diag(table, cfg.out / f"{base}.png")
    ns = table.levels
    big = ns >= 50
    if np.count_nonzero(big) >= 8:
        if cfg.d == 2:
            # distance outside the oscillation envelope should decay like
            # the stated log n / sqrt(n) remainder
            excess = np.maximum(
                np.abs(table.exact[big] - table.lead[big])
                - (table.env_hi[big] - table.lead[big]),
                0.0,
            )
            norm = np.log(ns[big]) / np.sqrt(ns[big])
            ratio = excess / norm
            half = len(ratio) // 2
            fitted = float(np.max(ratio[:half])) if half else 0.0
            worst = float(np.max(ratio[half:]))
            cfg.check("DIAG-ENVELOPE", worst <= max(2.0 * fitted, 1e-6), worst)
        else:
            dev = np.abs(table.exact[big] / table.lead[big] - 1.0)
            f = fit_exponent(ns[big].astype(float), np.maximum(dev, 1e-300))
            cfg.check("DIAG-TREND", f.slope < 0.0, f.slope)
    else:
        cfg.check("DIAG-FINITE", bool(np.all(np.isfinite(table.exact))), float(len(ns)))


def cmd_dudley(cfg: RunConfig) -> None:
    grid = np.linspace(cfg.r_min, cfg.r_max, cfg.grid_count)
    scan = dudley_scan(cfg.d, cfg.n_list, grid)
    base = f"dudley_d{cfg.d}"
    report.write_scan(scan, cfg.out / f"{base}.csv")
    if cfg.figures:
        figures.save_scan(scan, cfg.out / f"{base}.png")
    cfg.check("A5-BAND", scan.spread <= 10.0, scan.spread)


def cmd_szcheck(cfg: RunConfig) -> None:
    if cfg.p is not None:
        rep = lp_condition(cfg.d, cfg.p, cfg.coeffs, cfg.l_max)
        tag = f"lp{cfg.p:g}"
    else:
        rep = sz_condition(cfg.d, cfg.coeffs, cfg.l_max)
        tag = "sz"
    base = f"szcheck_{tag}_d{cfg.d}"
    report.write_condition(rep, cfg.out / f"{base}.csv")
    if cfg.figures:
        figures.save_condition(rep, cfg.out / f"{base}.png")
    print(f"verdict: {rep.verdict} ({rep.reason})")
    print(
        f"value in [{format_float(rep.value.lower)}, {format_float(rep.value.upper)}]"
        f" at cutoff {rep.cutoffs[-1]}"
    )
    cfg.check("SZ-VERDICT", rep.verdict in ("converging", "diverging"), 1.0)


def cmd_entropy(cfg: RunConfig) -> None:
    rep = theta_independence_report(cfg.thetas, cfg.coeffs, p_max=cfg.p_max)
    report.write_theta_report(rep, cfg.out / "entropy_theta.csv")
    if cfg.figures:
        figures.save_theta(rep, cfg.out / "entropy_theta.png")
    rows = []
    for t in cfg.thetas:
        res = entropic_integral(t, cfg.coeffs, max_panels=80)
        rows.append(
            (
                t,
                res.value,
                res.tail_estimate if math.isfinite(res.tail_estimate) else -1.0,
                int(res.divergent),
                res.panels_used,
            )
        )
    report.write_csv(
        cfg.out / "entropy_integral.csv",
        ["theta", "value", "tail_estimate", "divergent", "panels"],
        rows,
    )
    cfg.check("A10-IDENTITY", rep.identity_ok, float(len(rep.identity_checks)))
    cfg.check("THETA-RATIO", rep.max_pairwise_ratio <= 10.0, rep.max_pairwise_ratio)
    cfg.check("THETA-MONOTONE", rep.monotone_ok, 1.0 if rep.monotone_ok else 0.0)


def cmd_sample(cfg: RunConfig) -> None:
    pts = arc_grid(cfg.d, cfg.points)
    cov = field_covariance(cfg.d, cfg.coeffs, pts, cfg.n_sum)
    sample = sample_field(cov, cfg.draws, cfg.seed, points=pts)
    base = f"sample_d{cfg.d}_seed{cfg.seed}"
    report.write_sample(sample, cfg.out / f"{base}.csv")
    if cfg.figures:
        figures.save_sample(sample, cfg.out / f"{base}.png")
    if cfg.draws >= 2000:
        emp = sample.empirical_covariance()
        frob = float(np.linalg.norm(emp - cov) / np.linalg.norm(cov))
        tol = 0.05 * math.sqrt(20_000.0 / cfg.draws)
        cfg.check("SAMPLE-COV", frob <= tol, frob)
    else:
        cfg.check("SAMPLE-FINITE", bool(np.all(np.isfinite(sample.draws))), float(cfg.draws))
    if cfg.blocks:
        rows = sup_norm_partial_sums(
            cfg.d, cfg.coeffs, pts, cfg.blocks, min(cfg.draws, 4000), cfg.seed
        )
        report.write_blocks(rows, cfg.out / f"sample_blocks_d{cfg.d}.csv")
        if cfg.figures:
            figures.save_blocks(rows, cfg.out / f"sample_blocks_d{cfg.d}.png")


def _verify_prop14(cfg: RunConfig) -> None:
    rep = prop14_suite(cfg.d)
    report.write_csv(
        cfg.out / f"verify_prop14_d{cfg.d}.csv",
        ["criterion", "passed", "value"],
        ((c.criterion, int(c.passed), c.value) for c in rep.checks),
        [f"rate_kind={rep.rate_kind}", f"rate_slope={format_float(rep.rate_fit.slope)}"],
    )
    for c in rep.checks:
        cfg.check(c.criterion, c.passed, c.value)
    # the pseudo-distance band rides on the same two-sided estimates
    scan = dudley_scan(cfg.d, (64, 128, 256, 512), np.linspace(0.02, 1.0, 40))
    cfg.check("A5-BAND", scan.spread <= 10.0, scan.spread)


def _verify_dudley(cfg: RunConfig) -> None:
    grid = np.linspace(0.02, 1.0, 40)
    spreads = []
    for d in (2, 3):
        scan = dudley_scan(d, (64, 128, 256, 512), grid)
        spreads.append(scan.spread)
    cfg.check("A5-BAND", max(spreads) <= 10.0, max(spreads))


def _verify_j0band(cfg: RunConfig) -> None:
    lo, hi = j0_band()
    ok = 0.2 <= lo and hi <= 1.5
    cfg.check("A6-BAND", ok, hi)
    report.write_csv(
        cfg.out / "verify_j0band.csv",
        ["band_min", "band_max"],
        [(lo, hi)],
    )


def _verify_oscint(cfg: RunConfig) -> None:
    alphas = np.arange(1.0, 33.0)
    worst = float(
        np.max(np.abs(osc_integral_many(alphas, 0.0) - 2.0 * np.sin(alphas) / alphas))
    )
    cfg.check("A7-IDENTITY", worst <= 1e-10, worst)
    rows = []
    for beta in (0.5, 1.5):
        centers, maxima = [], []
        lo = 10.0
        while lo < 320.0:
            hi = 2.0 * lo
            grid = np.arange(lo, hi, 0.25)
            maxima.append(float(np.max(np.abs(osc_integral_many(grid, beta)))))
            centers.append(math.sqrt(lo * hi))
            lo = hi
        f = fit_exponent(np.array(centers), np.array(maxima))
        rows.append((beta, f.slope))
        cfg.check(f"A7-DECAY-B{beta:g}", abs(f.slope + (1.0 + beta)) <= 0.15, f.slope)
    worst_cf = 0.0
    for a0 in (0.5, 1.0, 2.0):
        for beta in (-0.5, 0.0, 0.5, 1.5):
            worst_cf = max(worst_cf, contraction_factor(a0, beta))
    cfg.check("A7-CONTRACTION", worst_cf < 1.0, worst_cf)
    report.write_csv(cfg.out / "verify_oscint.csv", ["beta", "slope"], rows)


def _verify_euler(cfg: RunConfig) -> None:
    per_a = {}
    for a in (0.0, 1.0, 2.0 * math.sqrt(2.0)):
        cmax = 0.0
        for beta in (-0.5, 0.0, 0.5):
            for e in range(6, 14):
                n = 2**e
                c = euler_maclaurin_check(n, a, beta)
                cmax = max(cmax, c.discrepancy / (n**beta * math.log(n)))
        per_a[a] = cmax
    vals = list(per_a.values())
    spread = max(vals) / min(vals)
    cfg.check("A8-UNIFORM", spread <= 3.0, spread)
    report.write_csv(
        cfg.out / "verify_euler.csv",
        ["a", "constant"],
        per_a.items(),
        [f"overall_constant={format_float(max(vals))}"],
    )


def cmd_verify(cfg: RunConfig) -> None:
    suites = {
        "prop14": _verify_prop14,
        "dudley": _verify_dudley,
        "j0band": _verify_j0band,
        "oscint": _verify_oscint,
        "euler": _verify_euler,
    }
    if cfg.suite == "all":
        for name, fn in suites.items():
            if name == "dudley":
                continue  # prop14 already emits the A5 band
            fn(cfg)
    else:
        suites[cfg.suite](cfg)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(command=args.command)
    cfg.out = getattr(args, "out", Path("."))
    cfg.out.mkdir(parents=True, exist_ok=True)
    cfg.figures = getattr(args, "figures", True)
    try:
        if args.command == "profile":
            cfg.d, cfg.n = args.d, args.n
            cfg.grid_count, cfg.r_max, cfg.radius = args.r_count, args.r_max, args.radius
            if cfg.d < 2 or cfg.n < 1:
                raise ValueError("profile needs d >= 2 and n >= 1")
            cmd_profile(cfg)
        elif args.command == "diag":
            cfg.d = args.d
            cfg.n_list = (args.n_min, args.n_max)
            cmd_diag(cfg)
        elif args.command == "dudley":
            cfg.d = args.d
            cfg.n_list = tuple(int(s) for s in args.n_list.split(","))
            cfg.r_min, cfg.r_max, cfg.grid_count = args.r_min, args.r_max, args.r_count
            cmd_dudley(cfg)
        elif args.command == "szcheck":
            cfg.d, cfg.p, cfg.l_max = args.d, args.p, args.l_max
            cfg.coeffs = _coeffs_from_args(args)
            cmd_szcheck(cfg)
        elif args.command == "entropy":
            cfg.thetas = tuple(args.theta) if args.theta else (0.5, 1.0, 2.0)
            cfg.p_max = args.p_max
            default = CoefficientSequence.power_log(a=1.5, b=0.0, n0=1)
            cfg.coeffs = _coeffs_from_args(args) if (args.law or args.coeff_file) else default
            cmd_entropy(cfg)
        elif args.command == "sample":
            cfg.d, cfg.points, cfg.draws = args.d, args.points, args.draws
            cfg.n_sum, cfg.blocks, cfg.seed = args.n_sum, args.blocks, args.seed
            cfg.coeffs = _coeffs_from_args(args)
            cmd_sample(cfg)
        elif args.command == "verify":
            cfg.d, cfg.suite = args.d, args.suite
            cmd_verify(cfg)
    except Exception as exc:  # computation failures exit 1 with a message
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0 if cfg.all_passed else 1


if __name__ == "__main__":
    sys.exit(main())
