"""Bracketed sums of power-log sequences.

Series finiteness cannot be decided from finitely many terms, so every
tail here is returned as a ``Bracket`` whose lower/upper bounds come
from the integral test (left/right endpoint rules for a monotone
summand) and whose estimate adds the first Euler-Maclaurin corrections.
All functions handle the term family

    f(n) = n^w * log(n + 1)^(-v)

for real exponents w, v.  Tails are infinite when w > -1, or w = -1
with v <= 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["Bracket", "powlog", "powlog_tail", "powlog_tail_many", "powlog_partial"]

_DIRECT_CUT = 4096          # below this, tails are summed term by term
_FP_SLACK = 1e-12           # relative slack attached to exact float sums
_QUAD_SLACK = 1e-9          # relative slack attached to numeric integrals


@dataclass(frozen=True)
class Bracket:
    """lower <= true value <= upper, with a best estimate in between."""

    lower: float
    estimate: float
    upper: float

    def __add__(self, other: "Bracket") -> "Bracket":
        return Bracket(
            self.lower + other.lower,
            self.estimate + other.estimate,
            self.upper + other.upper,
        )

    def scaled(self, factor: float) -> "Bracket":
        if factor < 0:
            raise ValueError("brackets only scale by nonnegative factors")
        return Bracket(self.lower * factor, self.estimate * factor, self.upper * factor)

    @property
    def finite(self) -> bool:
        return math.isfinite(self.upper)

    @staticmethod
    def exact(value: float) -> "Bracket":
        slack = abs(value) * _FP_SLACK
        return Bracket(value - slack, value, value + slack)

    @staticmethod
    def infinite() -> "Bracket":
        return Bracket(math.inf, math.inf, math.inf)


def powlog(w: float, v: float, n) -> np.ndarray:
    """Term value n^w * log(n+1)^(-v); vectorized."""
    n = np.asarray(n, dtype=float)
    return n**w * np.log(n + 1.0) ** (-v)


def _powlog_deriv(w: float, v: float, t: float) -> float:
    f = float(powlog(w, v, t))
    return f * (w / t - v / ((t + 1.0) * math.log(t + 1.0)))


def tail_divergent(w: float, v: float) -> bool:
    """True when sum_{n >= m} n^w log(n+1)^(-v) is infinite."""
    if w > -1.0 + 1e-12:
        return True
    if abs(w + 1.0) <= 1e-12:
        return v <= 1.0 + 1e-12
    return False


_GL32_X, _GL32_W = np.polynomial.legendre.leggauss(32)


def _integral_tail_many(w: float, v: float, ms: np.ndarray) -> np.ndarray:
    """int_m^infty t^w log(t+1)^(-v) dt for each m (requires w < -1)."""
    rho = -(w + 1.0)
    if rho <= 0:
        raise ValueError("integral tail requires w < -1")
    # substitute t = m * exp(sigma / rho); integrand becomes
    # m^(w+1)/rho * exp(-sigma) * log(m e^{sigma/rho} + 1)^(-v)
    s_hi = 50.0 + 10.0 * max(0.0, -v)
    n_panels = max(12, int(math.ceil(s_hi / 4.0)))
    edges = np.linspace(0.0, s_hi, n_panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    sigma = (mid[:, None] + half[:, None] * _GL32_X[None, :]).ravel()
    wq = (half[:, None] * _GL32_W[None, :]).ravel()
    ms = np.asarray(ms, dtype=float)
    # log(m e^{s/rho} + 1) = log(m) + s/rho + log(1 + e^{-...}/m); the last
    # piece matters only for small m, keep it exactly via log1p.
    logm = np.log(ms)
    core = logm[:, None] + sigma[None, :] / rho
    corr = np.log1p(np.exp(-core))
    logfac = (core + corr) ** (-v)
    integ = np.exp(-sigma)[None, :] * logfac
    return ms ** (w + 1.0) / rho * (integ @ wq)


def powlog_tail_many(w: float, v: float, starts) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(lower, estimate, upper) arrays for sum_{n >= m} n^w log(n+1)^(-v).

    All starts must be >= 2 and in the region where the summand is
    nonincreasing (automatic for w <= 0, v >= 0).
    """
    starts = np.asarray(starts, dtype=float)
    if np.any(starts < 2):
        raise ValueError("starts must be >= 2")
    if tail_divergent(w, v):
        inf = np.full(starts.shape, math.inf)
        return inf, inf, inf
    if v < 0 and _powlog_deriv(w, v, float(np.min(starts))) > 0:
        raise ValueError(
            "summand still increasing at the smallest start; integral-test "
            "brackets need the nonincreasing region"
        )
    if abs(w + 1.0) <= 1e-12:
        # exact log-integral: int_m^inf dt/(t log^v(t+1)) bracketed between
        # the same expression at log(m) and log(m) + log(1 + 1/m)
        big_l = np.log(starts)
        delta = np.log1p(1.0 / starts)
        hi_i = big_l ** (1.0 - v) / (v - 1.0)
        lo_i = (big_l + delta) ** (1.0 - v) / (v - 1.0)
    else:
        base = _integral_tail_many(w, v, starts)
        lo_i = base * (1.0 - _QUAD_SLACK)
        hi_i = base * (1.0 + _QUAD_SLACK)
    f0 = powlog(w, v, starts)
    fp0 = f0 * (w / starts - v / ((starts + 1.0) * np.log(starts + 1.0)))
    lo = lo_i
    hi = hi_i + f0
    est = np.clip(0.5 * (lo_i + hi_i) + 0.5 * f0 - fp0 / 12.0, lo, hi)
    return lo, est, hi


def powlog_tail(w: float, v: float, start: int) -> Bracket:
    """Bracket for sum_{n >= start} n^w log(n+1)^(-v)."""
    if start < 1:
        raise ValueError("start must be >= 1")
    if tail_divergent(w, v):
        return Bracket.infinite()
    if start < _DIRECT_CUT:
        ns = np.arange(start, _DIRECT_CUT + 1)
        head = float(np.sum(powlog(w, v, ns)))
        lo, est, hi = powlog_tail_many(w, v, np.array([_DIRECT_CUT + 1.0]))
        slack = abs(head) * _FP_SLACK
        return Bracket(head - slack + lo[0], head + est[0], head + slack + hi[0])
    lo, est, hi = powlog_tail_many(w, v, np.array([float(start)]))
    return Bracket(lo[0], est[0], hi[0])


def _integral_segment(w: float, v: float, lo: float, hi: float) -> float:
    """Numeric int_lo^hi t^w log(t+1)^(-v) dt over geometric panels."""
    if hi <= lo:
        return 0.0
    n_panels = max(1, int(math.ceil(math.log2(hi / lo))))
    edges = lo * (hi / lo) ** (np.arange(n_panels + 1) / n_panels)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    t = (mid[:, None] + half[:, None] * _GL32_X[None, :]).ravel()
    wq = (half[:, None] * _GL32_W[None, :]).ravel()
    return float(np.sum(powlog(w, v, t) * wq))


def powlog_partial(w: float, v: float, m1: int, m2) -> Bracket:
    """Bracket for sum_{n = m1}^{m2} n^w log(n+1)^(-v); m2 may be huge."""
    if m2 < m1:
        return Bracket(0.0, 0.0, 0.0)
    m1 = max(int(m1), 1)
    if m2 - m1 <= 2_000_000:
        ns = np.arange(m1, int(m2) + 1, dtype=float)
        return Bracket.exact(float(np.sum(powlog(w, v, ns))))
    cut = m1 + 65536
    ns = np.arange(m1, cut, dtype=float)
    head = float(np.sum(powlog(w, v, ns)))
    a, b = float(cut), float(m2)
    integral = _integral_segment(w, v, a, b)
    fa, fb = float(powlog(w, v, a)), float(powlog(w, v, b))
    lo = head + integral * (1.0 - _QUAD_SLACK) + min(fa, fb)
    hi = head + integral * (1.0 + _QUAD_SLACK) + max(fa, fb)
    est = head + integral + 0.5 * (fa + fb) + (
        _powlog_deriv(w, v, b) - _powlog_deriv(w, v, a)
    ) / 12.0
    return Bracket(lo, min(max(est, lo), hi), hi)
