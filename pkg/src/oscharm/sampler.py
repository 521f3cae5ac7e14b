"""Gaussian sampling of the random eigenfunction series.

The joint law of the series at finitely many points is the centered
Gaussian whose covariance is

    C_ij = sum_{n=1}^{n_max} c(n)^2 e_{d,n}(x_i, x_j) / dim(E_n),

so sampling is covariance-based: Cholesky of C (with escalating jitter
for near-coincident points) applied to standard normals.  Draws come
from a counter-based generator keyed by (seed, draw index), which makes
the output independent of execution order and thread count.

Also here: the stationary circle-process kernel sum c_n J_0(lambda_n r),
a Monte-Carlo check of the row-sup moment bound

    E sup_i |sum_j a_ij g_ij| <= C sqrt(log(2 + I)) max_i ||a_i||,

and per-block sup statistics over doubly-dyadic level blocks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .conditions import CoefficientSequence, block_mass
from .geometry import hat_coords_general
from .special import eigenspace_dim, normalized_bessel_many
from .spectral import spectral_levels
from .util import parallel_map

__all__ = [
    "FieldSample",
    "field_covariance",
    "cholesky_with_jitter",
    "draw_normals",
    "sample_field",
    "StationarySpec",
    "stationary_kernel",
    "SupTestResult",
    "gaussian_sup_test",
    "BlockSupRow",
    "sup_norm_partial_sums",
    "arc_grid",
]

BLOCK_LEVEL_CAP = 1 << 11


def arc_grid(d: int, count: int, span: float = math.pi / 3.0) -> np.ndarray:
    """Points (cos a, sin a, 0, ...) on the arc a in [0, span] of S^{d-1}."""
    if d < 2:
        raise ValueError("d must be >= 2")
    if count < 1:
        raise ValueError("count must be >= 1")
    angles = np.linspace(0.0, span, count)
    pts = np.zeros((count, d))
    pts[:, 0] = np.cos(angles)
    pts[:, 1] = np.sin(angles)
    return pts


def field_covariance(d: int, coeffs: CoefficientSequence, points, n_max: int) -> np.ndarray:
    """Covariance matrix of the truncated random series at the given points."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != d:
        raise ValueError(f"points must be an (m, {d}) array")
    m = pts.shape[0]
    for i in range(m):
        for j in range(i + 1, m):
            if np.linalg.norm(pts[i] - pts[j]) < 1e-12:
                raise ValueError(f"points {i} and {j} coincide")
    ns = np.arange(1, n_max + 1)
    dims = np.array([eigenspace_dim(d, int(n)) for n in ns], dtype=float)
    w = coeffs.c_many(ns) ** 2 / dims

    idx = [(i, j) for i in range(m) for j in range(i, m)]

    def one_pair(ij):
        i, j = ij
        levels = spectral_levels(d, hat_coords_general(pts[i], pts[j]), n_max)
        return float(np.dot(w, levels[1:]))

    vals = parallel_map(one_pair, idx)
    cov = np.empty((m, m))
    for (i, j), vv in zip(idx, vals):
        cov[i, j] = cov[j, i] = vv
    return cov


def cholesky_with_jitter(cov: np.ndarray) -> tuple[np.ndarray, float]:
    """Cholesky factor, adding eps*trace/dim*I with eps doubling from 1e-12.

    Gives up past eps = 1e-6 (genuinely singular input).
    """
    cov = np.asarray(cov, dtype=float)
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
        raise ValueError("covariance must be square")
    if np.max(np.abs(cov - cov.T)) > 1e-12 * max(1.0, np.max(np.abs(cov))):
        raise ValueError("covariance must be symmetric")
    if not np.any(cov):
        return np.zeros_like(cov), 0.0
    scale = float(np.trace(cov)) / cov.shape[0]
    try:
        return np.linalg.cholesky(cov), 0.0
    except np.linalg.LinAlgError:
        pass
    eps = 1e-12
    while eps <= 1e-6:
        try:
            return (
                np.linalg.cholesky(cov + eps * scale * np.eye(cov.shape[0])),
                eps * scale,
            )
        except np.linalg.LinAlgError:
            eps *= 2.0
    raise np.linalg.LinAlgError(
        "covariance not positive definite even with jitter 1e-6 * trace/dim"
    )


def draw_normals(seed: int, draw_index: int, count: int) -> np.ndarray:
    """Standard normals of one draw, from a counter-based stream.

    Keyed by (seed, draw_index), so any execution order reproduces the
    same values.
    """
    key = np.array([seed & (2**64 - 1), draw_index], dtype=np.uint64)
    gen = np.random.Generator(np.random.Philox(key=key))
    return gen.standard_normal(count)


@dataclass(frozen=True)
class FieldSample:
    """Joint Gaussian draws of the field at a point grid.

    ``seed`` holds the 64-bit key that actually drives the streams
    (negative inputs are recorded in their unsigned form).
    """

    covariance: np.ndarray
    draws: np.ndarray          # (num_draws, num_points)
    seed: int
    jitter: float
    points: np.ndarray | None = None

    @property
    def num_draws(self) -> int:
        return self.draws.shape[0]

    def empirical_covariance(self) -> np.ndarray:
        return self.draws.T @ self.draws / self.draws.shape[0]


def sample_field(cov: np.ndarray, num_draws: int, seed: int, points=None) -> FieldSample:
    """Exact joint-Gaussian draws by covariance factorization."""
    if num_draws < 1:
        raise ValueError("num_draws must be >= 1")
    chol, jitter = cholesky_with_jitter(cov)
    m = chol.shape[0]
    normals = np.empty((num_draws, m))
    for i in range(num_draws):
        normals[i] = draw_normals(seed, i, m)
    draws = normals @ chol.T
    return FieldSample(
        covariance=np.asarray(cov, dtype=float),
        draws=draws,
        seed=int(seed) & (2**64 - 1),
        jitter=jitter,
        points=None if points is None else np.asarray(points, dtype=float),
    )


@dataclass(frozen=True)
class StationarySpec:
    """Weights c_n and frequencies lambda_n = n^theta of the circle process."""

    weights: CoefficientSequence
    theta: float = 0.5
    arc: tuple = (0.0, math.pi / 3.0)

    def frequencies(self, n_max: int) -> np.ndarray:
        return np.arange(1, n_max + 1, dtype=float) ** self.theta


def stationary_kernel(spec: StationarySpec, r: float, rel_tail: float = 1e-8) -> float:
    """K(r) = sum_n c_n J_0(lambda_n r), truncated with tail <= rel_tail * sum c_n."""
    if r < 0:
        raise ValueError("r must be >= 0")
    total = spec.weights.weight_total()
    if not total.finite:
        raise ValueError("stationary kernel needs summable weights")
    target = rel_tail * max(total.lower, 1e-300)
    if spec.weights.kind == "explicit":
        n_max = spec.weights.support_end or 0
    else:
        from .tails import powlog_tail

        n_max = max(spec.weights.n0, 4)
        while powlog_tail(-spec.weights.a, spec.weights.b, n_max + 1).upper > target:
            n_max *= 2
            if n_max > 10**7:
                raise ValueError(
                    "weights decay too slowly to reach the 1e-8 truncation target"
                )
    if n_max == 0:
        return 0.0
    ns = np.arange(1, n_max + 1)
    cs = spec.weights.c_many(ns)
    j0 = normalized_bessel_many(2, ns.astype(float) ** spec.theta * r)
    return float(np.dot(cs, j0))


@dataclass(frozen=True)
class SupTestResult:
    """Monte-Carlo row-sup moment against its sqrt(log) bound form."""

    estimate: float
    bound_form: float
    trials: int

    @property
    def ratio(self) -> float:
        return self.estimate / self.bound_form if self.bound_form > 0 else math.inf


def gaussian_sup_test(
    big_i: int, big_j: int, row_norms, num_trials: int, seed: int
) -> SupTestResult:
    """Estimate E sup_i |sum_j a_ij g_ij| for a random-direction matrix.

    Row i of the matrix is row_norms[i] times a uniformly random unit
    vector of R^J; the bound form is sqrt(log(2 + I)) * max row norm.
    """
    if big_i < 1 or big_j < 1:
        raise ValueError("I and J must be >= 1")
    row_norms = np.asarray(row_norms, dtype=float)
    if row_norms.shape != (big_i,):
        raise ValueError(f"row_norms must have shape ({big_i},)")
    gen = np.random.Generator(
        np.random.Philox(key=np.array([seed & (2**64 - 1), 0], dtype=np.uint64))
    )
    mat = gen.standard_normal((big_i, big_j))
    norms = np.linalg.norm(mat, axis=1)
    norms[norms == 0] = 1.0
    mat = mat / norms[:, None] * row_norms[:, None]
    total = 0.0
    chunk = max(1, int(2e7 // (big_i * big_j)))
    done = 0
    while done < num_trials:
        k = min(chunk, num_trials - done)
        g = gen.standard_normal((k, big_i, big_j))
        sups = np.max(np.abs(np.einsum("kij,ij->ki", g, mat)), axis=1)
        total += float(np.sum(sups))
        done += k
    bound = math.sqrt(math.log(2.0 + big_i)) * float(np.max(row_norms))
    return SupTestResult(estimate=total / num_trials, bound_form=bound, trials=num_trials)


@dataclass(frozen=True)
class BlockSupRow:
    """Monte-Carlo sup of one doubly-dyadic block of levels."""

    block: int
    n_lo: int
    n_hi: int
    mc_sup: float
    theoretical_weight: float


def sup_norm_partial_sums(
    d: int,
    coeffs: CoefficientSequence,
    points,
    blocks: int,
    num_draws: int,
    seed: int,
) -> list[BlockSupRow]:
    """E sup over the grid of each block field, next to its dyadic weight.

    Block l spans levels [2^{2^l}, 2^{2^{l+1}}), capped at 2^11; the
    weight column is 2^{l/2} (sum_block c(n)^2 n^{-d/2})^{1/2}.
    """
    if blocks > 4:
        raise ValueError("blocks > 4 exceed the desk-scale level cap")
    pts = np.asarray(points, dtype=float)
    rows = []
    for lev in range(blocks):
        n_lo = 2 ** (2**lev)
        n_hi = min(2 ** (2 ** (lev + 1)), BLOCK_LEVEL_CAP + 1)
        if n_lo > BLOCK_LEVEL_CAP:
            raise ValueError(f"block {lev} starts beyond the level cap {BLOCK_LEVEL_CAP}")
        block_coeffs = _restrict(coeffs, n_lo, n_hi)
        cov = field_covariance(d, block_coeffs, pts, n_hi - 1)
        sample = sample_field(cov, num_draws, seed + lev)
        mc_sup = float(np.mean(np.max(np.abs(sample.draws), axis=1)))
        weight = 2.0 ** (lev / 2.0) * math.sqrt(
            max(0.0, block_mass(d, coeffs, n_lo, n_hi).estimate)
        )
        rows.append(
            BlockSupRow(
                block=lev, n_lo=n_lo, n_hi=n_hi, mc_sup=mc_sup, theoretical_weight=weight
            )
        )
    return rows


def _restrict(coeffs: CoefficientSequence, n_lo: int, n_hi: int) -> CoefficientSequence:
    """Coefficients zeroed outside [n_lo, n_hi)."""
    ns = np.arange(1, n_hi)
    vals = coeffs.c_many(ns)
    vals[: n_lo - 1] = 0.0
    return CoefficientSequence.explicit(vals)
