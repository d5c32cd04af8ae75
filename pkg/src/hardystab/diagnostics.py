"""Geometric screening of candidate sets.

Partial sums of boundary mass (the divergence test for uniqueness), cone
membership at boundary vertices, and the angular thickening of a set: the
radial reach per direction and the open arc set of directions reaching
beyond a given radius, with its exact measure via interval merging.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, RangeError

_TWO_PI = 2.0 * math.pi


def _as_points(points) -> list[complex]:
    if hasattr(points, "points"):
        points = points.points
    out = []
    for z in points:
        z = complex(z)
        if abs(z) > 1.0 + 1e-12:
            raise DomainError(f"point {z} lies outside the closed disc")
        out.append(z)
    return out


def non_blaschke_sum(points: Sequence[complex], upto: int | None = None) -> float:
    """Partial sum of the boundary masses 1-|z_j| over the first ``upto`` points.

    Monotone in ``upto``; divergence along the full sequence is the
    classical uniqueness threshold.
    """
    pts = _as_points(points)
    if upto is None:
        upto = len(pts)
    if not 0 <= upto <= len(pts):
        raise RangeError(f"prefix length {upto} out of range for {len(pts)} points")
    return float(sum(1.0 - abs(z) for z in pts[:upto]))


def stolz_membership(z: complex, vertex: complex, K: float = 1.0) -> bool:
    """Whether z lies in the cone |z - vertex| <= K (1 - |z|).

    The vertex must be unimodular and the aperture K at least 1.
    """
    if K < 1.0:
        raise RangeError(f"aperture must be at least 1, got {K}")
    vertex = complex(vertex)
    if abs(abs(vertex) - 1.0) > 1e-12:
        raise DomainError(f"vertex {vertex} is not unimodular")
    z = complex(z)
    if abs(z) > 1.0 + 1e-12:
        raise DomainError(f"point {z} lies outside the closed disc")
    return abs(z - vertex) <= K * (1.0 - abs(z))


def _circular_delta(a: np.ndarray | float, b: np.ndarray | float) -> np.ndarray | float:
    d = np.abs(np.mod(a - b, _TWO_PI))
    return np.minimum(d, _TWO_PI - d)


def rho_of_theta(points, theta: float) -> float:
    """Radial reach of the angular thickening in direction theta.

    A point of modulus r and angle phi covers directions strictly within
    1-r of phi; the reach is the largest covering modulus, 0 when nothing
    covers the direction.
    """
    pts = _as_points(points)
    if not pts:
        return 0.0
    arr = np.asarray(pts, dtype=complex)
    radii = np.abs(arr)
    phis = np.angle(arr)
    mask = _circular_delta(float(theta), phis) < 1.0 - radii
    if not np.any(mask):
        return 0.0
    return float(np.max(radii[mask]))


def rho_of_theta_batch(points, thetas: np.ndarray) -> np.ndarray:
    """Vectorised radial reach over an array of directions."""
    pts = _as_points(points)
    thetas = np.asarray(thetas, dtype=float)
    out = np.zeros(thetas.shape, dtype=float)
    if not pts:
        return out
    arr = np.asarray(pts, dtype=complex)
    radii = np.abs(arr)
    phis = np.angle(arr)
    for r, phi in zip(radii, phis):
        mask = _circular_delta(thetas, phi) < 1.0 - r
        np.maximum(out, np.where(mask, r, 0.0), out=out)
    return out


@dataclass(frozen=True)
class ArcSet:
    """Disjoint open arcs on the circle, normalized to [0, 2pi).

    Arcs wrapping through 0 are split there.  Merging joins overlapping
    arcs only; arcs that merely touch at an endpoint stay separate, so
    membership matches the strict inequalities defining the set.
    """

    intervals: tuple[tuple[float, float], ...]

    @property
    def measure(self) -> float:
        return float(sum(hi - lo for lo, hi in self.intervals))

    def contains(self, theta: float) -> bool:
        theta = float(np.mod(theta, _TWO_PI))
        los = [lo for lo, _ in self.intervals]
        i = bisect_right(los, theta) - 1
        if i < 0:
            return False
        lo, hi = self.intervals[i]
        return lo < theta < hi

    def is_subset_of(self, other: "ArcSet") -> bool:
        for lo, hi in self.intervals:
            if not any(olo <= lo and hi <= ohi for olo, ohi in other.intervals):
                return False
        return True

    def to_csv_rows(self) -> list[tuple[float, float]]:
        return [(lo, hi) for lo, hi in self.intervals]

    @classmethod
    def from_raw_arcs(cls, arcs: Iterable[tuple[float, float]]) -> "ArcSet":
        """Normalize, split wrap-around arcs at 0, and merge overlaps."""
        pieces: list[tuple[float, float]] = []
        for lo, hi in arcs:
            width = hi - lo
            if width <= 0.0:
                continue
            if width >= _TWO_PI:
                pieces.append((0.0, _TWO_PI))
                continue
            lo = float(np.mod(lo, _TWO_PI))
            hi = lo + width
            if hi > _TWO_PI:
                pieces.append((lo, _TWO_PI))
                pieces.append((0.0, hi - _TWO_PI))
            else:
                pieces.append((lo, hi))
        pieces.sort()
        merged: list[list[float]] = []
        for lo, hi in pieces:
            if merged and lo < merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], hi)
            else:
                merged.append([lo, hi])
        return cls(tuple((lo, hi) for lo, hi in merged))


def e_r_measure(points, r: float) -> tuple[ArcSet, float]:
    """Directions whose radial reach strictly exceeds r, with their measure.

    Each point of modulus above r contributes the open arc of half-width
    1-modulus around its angle; the union is merged exactly and its total
    length returned.  The measure is non-increasing in r.
    """
    if not 0.0 <= r < 1.0:
        raise RangeError(f"radius must lie in [0,1), got {r}")
    pts = _as_points(points)
    arcs = []
    for z in pts:
        rho = abs(z)
        if rho > r:
            phi = math.atan2(z.imag, z.real)
            width = 1.0 - rho
            arcs.append((phi - width, phi + width))
    arcset = ArcSet.from_raw_arcs(arcs)
    return arcset, arcset.measure
