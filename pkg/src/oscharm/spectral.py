"""Spectral function e_{d,n}(x, y) of -Laplace + |x|^2 on R^d.

The projector kernel onto the eigenspace of eigenvalue 2n + d is
evaluated through the hat coordinates as the Cauchy product

    e_{d,n}(x, y) = pi^{-(d-1)/2} * sum_{k + 2l = n} h_k(x_hat) h_k(y_hat) B_d(l),

so that no eigenbasis is ever materialized and every output is
basis-invariant.  A brute-force tensorization oracle, the Mehler
generating-series cross-check, the one- and two-term Bessel
approximations and the Omega_k increments used for the near-diagonal
analysis live here as well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import HatCoords, S_MAX, SpherePair, hat_coords, hat_coords_general
from .special import (
    bd_weights,
    eigenspace_dim,
    hermite_values,
    normalized_bessel,
    normalized_bessel_many,
)

__all__ = [
    "SpectralProfile",
    "OmegaEval",
    "MehlerComparison",
    "spectral_exact",
    "spectral_exact_grid",
    "spectral_levels",
    "spectral_oracle",
    "parity_check",
    "bessel_approx",
    "two_term_approx",
    "mehler_closed_form",
    "mehler_partial_sum",
    "omega",
    "omega_second_deriv_zero",
    "profile",
]

ORACLE_GUARD = 10**7


def spectral_exact_grid(d: int, n: int, x_hats, y_hats) -> np.ndarray:
    """e_{d,n} for many hat pairs at once (vectorized over the grid)."""
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    x_hats = np.atleast_1d(np.asarray(x_hats, dtype=float))
    y_hats = np.atleast_1d(np.asarray(y_hats, dtype=float))
    hx = hermite_values(n, x_hats)
    hy = hermite_values(n, y_hats)
    q = hx * hy                      # q[k] = h_k(x_hat) h_k(y_hat)
    b = bd_weights(d, n // 2)
    acc = b @ q[n::-2]               # sum over l of B_d(l) q[n - 2l]
    return math.pi ** (-(d - 1) / 2.0) * acc


def spectral_exact(d: int, n: int, hc: HatCoords) -> float:
    """Exact spectral function value from hat coordinates; cost O(n)."""
    return float(spectral_exact_grid(d, n, hc.x_hat, hc.y_hat)[0])


def spectral_levels(d: int, hc: HatCoords, n_max: int) -> np.ndarray:
    """e_{d,0}, ..., e_{d,n_max} at one pair, via a single Cauchy product."""
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    hx = hermite_values(n_max, float(hc.x_hat))
    hy = hermite_values(n_max, float(hc.y_hat))
    q = hx * hy
    b2 = np.zeros(2 * (n_max // 2) + 1)
    b2[::2] = bd_weights(d, n_max // 2)
    conv = np.convolve(q, b2)[: n_max + 1]
    return math.pi ** (-(d - 1) / 2.0) * conv


def _compositions(n: int, d: int) -> np.ndarray:
    """All d-tuples of nonnegative integers summing to n, as an (M, d) array."""
    if d == 1:
        return np.array([[n]], dtype=np.intp)
    blocks = []
    for i in range(n + 1):
        rest = _compositions(n - i, d - 1)
        blocks.append(
            np.column_stack([np.full(len(rest), i, dtype=np.intp), rest])
        )
    return np.vstack(blocks)


def spectral_oracle(d: int, n: int, x, y) -> float:
    """Brute-force tensorization sum over all compositions of n into d parts.

    Independent of the hat-coordinate route; guarded to desk scale
    (d * dim(E_n) <= 10^7).  Also valid at d = 1, where it reduces to
    h_n(x) h_n(y).
    """
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if x.size != d or y.size != d:
        raise ValueError(f"points must have dimension {d}")
    if d * eigenspace_dim(d, n) > ORACLE_GUARD:
        raise ValueError(
            f"oracle size d*dim(E_n) = {d * eigenspace_dim(d, n)} exceeds guard {ORACLE_GUARD}"
        )
    hx = hermite_values(n, x)        # (n+1, d)
    hy = hermite_values(n, y)
    prod = hx * hy
    comps = _compositions(n, d)
    cols = np.arange(d)
    return float(np.sum(np.prod(prod[comps, cols], axis=1)))


def parity_check(d: int, n: int, x, y) -> float:
    """Deviation |e_{d,n}(x, y) - (-1)^n e_{d,n}(x, -y)|."""
    y = np.asarray(y, dtype=float)
    e1 = spectral_exact(d, n, hat_coords_general(x, y))
    e2 = spectral_exact(d, n, hat_coords_general(x, -y))
    return abs(e1 - (-1) ** n * e2)


def bessel_approx(d: int, n: int, r: float) -> float:
    """One-term approximation n^{d/2-1} (2 pi)^{-d/2} J~_{d/2-1}(sqrt(2n) r)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    scale = n ** (d / 2.0 - 1.0) * (2.0 * math.pi) ** (-d / 2.0)
    return scale * normalized_bessel(d, math.sqrt(2.0 * n) * r)


def two_term_approx(d: int, n: int, pair: SpherePair) -> float:
    """Two-term approximation including the parity-alternating |x+y| term."""
    if n < 1:
        raise ValueError("n must be >= 1")
    scale = n ** (d / 2.0 - 1.0) * (2.0 * math.pi) ** (-d / 2.0)
    sn = math.sqrt(2.0 * n)
    main = normalized_bessel(d, sn * pair.chord)
    tail = normalized_bessel(d, sn * pair.cross_chord)
    return scale * (main + (-1) ** n * tail)


def mehler_closed_form(d: int, t: float, x, y) -> float:
    """Closed form of sum_n exp(-t(2n+d)) e_{d,n}(x, y) for t > 0."""
    if t <= 0:
        raise ValueError("t must be > 0")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    plus2 = float(np.dot(x + y, x + y))
    minus2 = float(np.dot(x - y, x - y))
    th = math.tanh(t)
    pref = (2.0 * math.pi * math.sinh(2.0 * t)) ** (-d / 2.0)
    return pref * math.exp(-0.25 * th * plus2 - 0.25 * minus2 / th)


@dataclass(frozen=True)
class MehlerComparison:
    """Partial generating series against its closed form, plus a crude tail."""

    partial: float
    closed_form: float
    tail_bound: float

    @property
    def discrepancy(self) -> float:
        return abs(self.partial - self.closed_form)


def mehler_partial_sum(d: int, t: float, x, y, n_max: int) -> MehlerComparison:
    """Partial sum of exp(-t(2n+d)) e_{d,n}(x, y) for n <= n_max.

    The reported tail bound uses sup |e_{d,n}| <= dim(E_n) crudely; it is
    a diagnostic, not a sharp estimate.
    """
    if t <= 0:
        raise ValueError("t must be > 0")
    hc = hat_coords_general(x, y)
    levels = spectral_levels(d, hc, n_max)
    ns = np.arange(n_max + 1)
    partial = float(np.sum(np.exp(-t * (2.0 * ns + d)) * levels))
    tail = 0.0
    n = n_max + 1
    while True:
        term = math.exp(-t * (2 * n + d)) * eigenspace_dim(d, n)
        tail += term
        if term <= 1e-18 * max(tail, 1e-300) or n > n_max + 10_000:
            break
        n += 1
    return MehlerComparison(
        partial=partial,
        closed_form=mehler_closed_form(d, t, x, y),
        tail_bound=tail,
    )


@dataclass(frozen=True)
class OmegaEval:
    """Diagonal-minus-offdiagonal Hermite increment Omega_k(s)."""

    k: int
    s: float
    value: float


def omega(k: int, s: float) -> OmegaEval:
    """Omega_k(s) = h_k(1)^2 - h_k(sqrt(1-s)) h_k(sqrt(1+s)), s in [0, sqrt(3)/2]."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if not (0.0 <= s <= S_MAX + 1e-12):
        raise ValueError(f"s must lie in [0, sqrt(3)/2], got {s}")
    pts = np.array([1.0, math.sqrt(1.0 - min(s, 1.0)), math.sqrt(1.0 + s)])
    h = hermite_values(k, pts)[k]
    return OmegaEval(k=k, s=s, value=float(h[0] * h[0] - h[1] * h[2]))


def omega_second_deriv_zero(k: int) -> float:
    """Closed-form Omega_k''(0); positive for all k >= 1, ~ sqrt(2k)/pi."""
    if k < 1:
        raise ValueError("k must be >= 1 (Omega_0 vanishes identically)")
    h = hermite_values(k, 1.0)
    hk, hkm1 = float(h[k]), float(h[k - 1])
    s2k = math.sqrt(2.0 * k)
    return 0.5 * s2k * (s2k * (hk * hk + hkm1 * hkm1) - hkm1 * hk)


@dataclass(frozen=True)
class SpectralProfile:
    """Tabulated e_{d,n} against chord distance, with Bessel approximations."""

    dimension: int
    level: int
    radius: float
    chords: np.ndarray
    exact: np.ndarray
    bessel1: np.ndarray
    bessel2: np.ndarray
    err1: np.ndarray = field(init=False)
    err2: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "err1", np.abs(self.exact - self.bessel1))
        object.__setattr__(self, "err2", np.abs(self.exact - self.bessel2))

    @property
    def normalization(self) -> float:
        """Scale n^{d/2-1} used when plotting profiles."""
        return self.level ** (self.dimension / 2.0 - 1.0) if self.level else 1.0

    def columns(self, normalized: bool = False):
        f = 1.0 / self.normalization if normalized else 1.0
        return {
            "r": self.chords,
            "exact": self.exact * f,
            "bessel1": self.bessel1 * f,
            "bessel2": self.bessel2 * f,
            "err1": self.err1 * f,
            "err2": self.err2 * f,
        }


def profile(
    d: int,
    n: int,
    r_grid=None,
    radius: float = 1.0,
) -> SpectralProfile:
    """Spectral profile over chord distances (default 201 points on [0, 1])."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if r_grid is None:
        r_grid = np.linspace(0.0, 1.0, 201)
    r_grid = np.asarray(r_grid, dtype=float)
    pairs = [SpherePair(d, float(r), radius) for r in r_grid]
    hats = [hat_coords(p) for p in pairs]
    x_hats = np.array([h.x_hat for h in hats])
    y_hats = np.array([h.y_hat for h in hats])
    exact = spectral_exact_grid(d, n, x_hats, y_hats)
    scale = n ** (d / 2.0 - 1.0) * (2.0 * math.pi) ** (-d / 2.0)
    sn = math.sqrt(2.0 * n)
    main = normalized_bessel_many(d, sn * r_grid)
    cross = normalized_bessel_many(d, sn * np.array([p.cross_chord for p in pairs]))
    bessel1 = scale * main
    bessel2 = scale * (main + (-1) ** n * cross)
    return SpectralProfile(
        dimension=d,
        level=n,
        radius=radius,
        chords=r_grid,
        exact=exact,
        bessel1=bessel1,
        bessel2=bessel2,
    )
