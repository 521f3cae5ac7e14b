"""Coordinate changes for point pairs.

A pair (x, y) enters every formula only through |x+y| and |x-y|, so a
pair of sphere points is stored as (dimension, chord, radius).  The hat
variables

    x_hat = (|x+y| + |x-y|) / 2,    y_hat = (|x+y| - |x-y|) / 2

form a nonlinear isometry: x_hat^2 + y_hat^2 = |x|^2 + |y|^2,
x_hat * y_hat = <x, y>, x_hat - y_hat = |x-y|.  On the unit sphere with
chord r <= 1 there is additionally a parameter s in [0, sqrt(3)/2] with
x_hat = sqrt(1+s) and y_hat = sqrt(1-s), and s <= r <= 2s/sqrt(3).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SpherePair",
    "HatCoords",
    "hat_coords",
    "hat_coords_general",
    "s_from_chord",
    "chord_from_s",
    "canonical_points",
]

S_MAX = math.sqrt(3.0) / 2.0


@dataclass(frozen=True)
class SpherePair:
    """Two points on a common sphere R*S^{d-1}, stored by chord distance."""

    dimension: int
    chord: float
    radius: float = 1.0

    def __post_init__(self) -> None:
        if self.dimension < 2:
            raise ValueError(f"dimension must be >= 2, got {self.dimension}")
        if not (self.radius > 0):
            raise ValueError("radius must be positive")
        if not (0.0 <= self.chord <= 2.0 * self.radius):
            raise ValueError(
                f"chord must lie in [0, 2R] = [0, {2 * self.radius}], got {self.chord}"
            )

    @property
    def cross_chord(self) -> float:
        """|x + y| = sqrt(4 R^2 - |x - y|^2)."""
        return math.sqrt(max(0.0, 4.0 * self.radius**2 - self.chord**2))


@dataclass(frozen=True)
class HatCoords:
    """Hat variables of a pair; ``s`` only for unit-sphere pairs with r <= 1."""

    x_hat: float
    y_hat: float
    s: float | None = None


def hat_coords(pair: SpherePair) -> HatCoords:
    """Hat coordinates of a sphere pair."""
    plus = pair.cross_chord
    x_hat = 0.5 * (plus + pair.chord)
    y_hat = 0.5 * (plus - pair.chord)
    s = None
    if pair.radius == 1.0 and pair.chord <= 1.0:
        s = x_hat * x_hat - 1.0
    return HatCoords(x_hat=x_hat, y_hat=y_hat, s=s)


def hat_coords_general(x, y) -> HatCoords:
    """Hat coordinates of two arbitrary points of equal dimension."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1 or x.size < 1:
        raise ValueError(f"points must be vectors of equal dimension, got {x.shape} and {y.shape}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ValueError("non-finite coordinates")
    plus = float(np.linalg.norm(x + y))
    minus = float(np.linalg.norm(x - y))
    return HatCoords(x_hat=0.5 * (plus + minus), y_hat=0.5 * (plus - minus), s=None)


def s_from_chord(r: float) -> float:
    """Solve r = sqrt(1+s) - sqrt(1-s) for s, unit sphere, r in [0, 1]."""
    if not (0.0 <= r <= 1.0):
        raise ValueError("chord must lie in [0, 1] for the s parametrization")
    return 0.5 * r * math.sqrt(4.0 - r * r)


def chord_from_s(s: float) -> float:
    """Chord distance sqrt(1+s) - sqrt(1-s) of the pair parametrized by s."""
    if not (0.0 <= s <= S_MAX + 1e-12):
        raise ValueError(f"s must lie in [0, sqrt(3)/2], got {s}")
    return math.sqrt(1.0 + s) - math.sqrt(1.0 - min(s, 1.0))


def canonical_points(pair: SpherePair) -> tuple[np.ndarray, np.ndarray]:
    """Representatives x = R e_1, y = R (cos a, sin a, 0, ...) of a pair.

    The opening angle is a = 2 arcsin(r / (2R)).
    """
    alpha = 2.0 * math.asin(pair.chord / (2.0 * pair.radius))
    x = np.zeros(pair.dimension)
    y = np.zeros(pair.dimension)
    x[0] = pair.radius
    y[0] = pair.radius * math.cos(alpha)
    y[1] = pair.radius * math.sin(alpha)
    return x, y
