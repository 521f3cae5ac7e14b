"""One-dimensional building blocks.

Hermite functions are evaluated with the L2-normalized three-term
recurrence

    h_{k+1}(x) = sqrt(2/(k+1)) x h_k(x) - sqrt(k/(k+1)) h_{k-1}(x),

which keeps every intermediate on the scale of the function values
themselves (the raw Hermite polynomials overflow around degree 150).
Normalized Bessel functions J~_nu(u) = (2/u)^nu J_nu(u) with
nu = d/2 - 1 are computed from the Poisson integral

    J~_nu(u) = 1/(sqrt(pi) Gamma((d-1)/2)) * int_{-1}^{1} cos(ut) (1-t^2)^{(d-3)/2} dt

after the substitution t = sin(phi), whose integrand
cos(u sin phi) cos^{d-2}(phi) is smooth for every integer d >= 2.  One
code path covers all dimensions and is exact down to u = 0, where the
value is 1/Gamma(d/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "HermiteBatch",
    "BesselOrder",
    "hermite_values",
    "hermite_batch",
    "hermite_deriv",
    "normalized_bessel",
    "normalized_bessel_many",
    "bd_weight",
    "bd_weights",
    "eigenspace_dim",
]

_PI_M14 = math.pi ** -0.25  # h_0(0)
_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class HermiteBatch:
    """Values h_0(x) ... h_{max_index}(x) at a single point."""

    max_index: int
    point: float
    values: np.ndarray


@dataclass(frozen=True)
class BesselOrder:
    """Bessel order nu = d/2 - 1 attached to an ambient dimension d >= 2."""

    dimension: int

    def __post_init__(self) -> None:
        if self.dimension < 2:
            raise ValueError(f"dimension must be >= 2, got {self.dimension}")

    @property
    def order(self) -> float:
        return self.dimension / 2.0 - 1.0

    @property
    def beta(self) -> float:
        return (self.dimension - 3) / 2.0


def hermite_values(n_max: int, x) -> np.ndarray:
    """All Hermite function values h_0(x) ... h_{n_max}(x).

    ``x`` may be a scalar or an ndarray; the returned array has shape
    ``(n_max + 1,) + shape(x)``.  Stable for |x| <= 10 and n_max up to
    at least 10^4; deep in the region |x| >> sqrt(2 n_max) the values
    are exponentially small and returned as best effort.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("non-finite evaluation point")
    out = np.empty((n_max + 1,) + x.shape)
    h0 = _PI_M14 * np.exp(-0.5 * x * x)
    out[0] = h0
    if n_max == 0:
        return out
    out[1] = _SQRT2 * x * h0
    for k in range(1, n_max):
        out[k + 1] = math.sqrt(2.0 / (k + 1)) * x * out[k] - math.sqrt(
            k / (k + 1.0)
        ) * out[k - 1]
    return out


def hermite_batch(n_max: int, x: float) -> HermiteBatch:
    """Evaluate h_0 ... h_{n_max} at a scalar point."""
    vals = hermite_values(n_max, float(x))
    return HermiteBatch(max_index=n_max, point=float(x), values=vals)


def hermite_deriv(n: int, x: float):
    """Derivative h_n'(x) = sqrt(2n) h_{n-1}(x) - x h_n(x), with h_{-1} = 0."""
    if n < 0:
        raise ValueError("n must be >= 0")
    vals = hermite_values(n, x)
    if n == 0:
        return -np.asarray(x, dtype=float) * vals[0] if np.ndim(x) else float(-x * vals[0])
    res = math.sqrt(2.0 * n) * vals[n - 1] - np.asarray(x, dtype=float) * vals[n]
    return float(res) if np.ndim(res) == 0 else res


_GL32_X, _GL32_W = np.polynomial.legendre.leggauss(32)


@lru_cache(maxsize=64)
def _halfpi_panels(panels: int):
    """Composite 32-node Gauss-Legendre grid on [-pi/2, pi/2]."""
    edges = np.linspace(-0.5 * math.pi, 0.5 * math.pi, panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    phi = (mid[:, None] + half[:, None] * _GL32_X[None, :]).ravel()
    w = (half[:, None] * _GL32_W[None, :]).ravel()
    return phi, w


def _poisson_raw(us: np.ndarray, power: int, tol: float = 1e-11) -> np.ndarray:
    """int_{-pi/2}^{pi/2} cos(u sin phi) cos^power(phi) dphi for each u.

    Composite Gauss-Legendre whose node count starts proportional to
    1 + max(u) (a few panels per oscillation wavelength) and doubles
    until two successive refinements agree to ``tol``.
    """
    u_max = float(np.max(us)) if us.size else 0.0
    panels = max(2, int(math.ceil((1.0 + u_max) * math.pi / 20.0)))
    prev = None
    while panels <= (1 << 16):
        phi, w = _halfpi_panels(panels)
        cp = w if power == 0 else np.cos(phi) ** power * w
        vals = np.cos(np.multiply.outer(us, np.sin(phi))) @ cp
        if prev is not None and np.max(np.abs(vals - prev)) <= tol:
            return vals
        prev = vals
        panels *= 2
    raise RuntimeError("Poisson integral quadrature failed to converge")


def _as_order(order) -> BesselOrder:
    if isinstance(order, BesselOrder):
        return order
    return BesselOrder(int(order))


def normalized_bessel_many(order, us) -> np.ndarray:
    """Vectorized J~_{d/2-1} over an array of nonnegative arguments."""
    bo = _as_order(order)
    us = np.asarray(us, dtype=float)
    if np.any(us < 0):
        raise ValueError("argument of the normalized Bessel function must be >= 0")
    raw = _poisson_raw(np.atleast_1d(us).ravel(), bo.dimension - 2)
    norm = math.exp(-math.lgamma((bo.dimension - 1) / 2.0)) / math.sqrt(math.pi)
    out = (raw * norm).reshape(np.atleast_1d(us).shape)
    return out if us.ndim else out.reshape(())


def normalized_bessel(order, u: float) -> float:
    """J~_{d/2-1}(u), continuous at u = 0 with value 1/Gamma(d/2)."""
    return float(normalized_bessel_many(order, float(u)))


def bd_weights(d: int, ell_max: int) -> np.ndarray:
    """Binomial-series weights B_d(0) ... B_d(ell_max).

    B_d(ell) = Gamma((d-1)/2 + ell) / (ell! Gamma((d-1)/2)), computed by
    the multiplicative recurrence with no Gamma evaluation, so there is
    no overflow up to ell ~ 10^6 at moderate d.
    """
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    if ell_max < 0:
        raise ValueError("ell_max must be >= 0")
    out = np.empty(ell_max + 1)
    out[0] = 1.0
    if ell_max:
        ell = np.arange(1.0, ell_max + 1.0)
        out[1:] = np.cumprod(((d - 1) / 2.0 + ell - 1.0) / ell)
    return out


def bd_weight(d: int, ell: int) -> float:
    """Single weight B_d(ell)."""
    if ell < 0:
        raise ValueError("ell must be >= 0")
    return float(bd_weights(d, ell)[ell])


def eigenspace_dim(d: int, n: int) -> int:
    """Number of multi-indices (i_1, ..., i_d) with i_1 + ... + i_d = n.

    Equals binomial(n + d - 1, d - 1); grows like n^{d-1}/(d-1)!.
    Exact (arbitrary-precision) integer, so no overflow is possible.
    """
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    return math.comb(n + d - 1, d - 1)
