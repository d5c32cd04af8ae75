"""Shared test helpers: deterministic hypothesis profile and point generators."""

import math

import numpy as np
from hypothesis import HealthCheck, settings

import hardystab as hs

settings.register_profile(
    "ci",
    derandomize=True,
    max_examples=100,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


def random_interior(rng: np.random.Generator, count: int, radius: float = 0.95) -> list[complex]:
    """Uniform points in the disc of the given radius (area measure)."""
    r = radius * np.sqrt(rng.uniform(0.0, 1.0, count))
    t = rng.uniform(0.0, 2.0 * math.pi, count)
    return [complex(x, y) for x, y in zip(r * np.cos(t), r * np.sin(t))]


def random_config(rng: np.random.Generator, n: int, radius: float = 0.95,
                  min_sep: float = 0.05) -> hs.Configuration:
    """Random configuration with a pseudo-hyperbolic separation floor."""
    nodes: list[complex] = []
    while len(nodes) < n:
        (z,) = random_interior(rng, 1, radius)
        if all(hs.gleason_distance(z, w) >= min_sep for w in nodes):
            nodes.append(z)
    return hs.Configuration(nodes)


def random_pointset(rng: np.random.Generator, count: int, radius: float = 0.9,
                    min_sep: float = 0.02, label: str = "") -> hs.PointSet:
    """Random candidate set with separated points."""
    pts: list[complex] = []
    while len(pts) < count:
        (z,) = random_interior(rng, 1, radius)
        if all(hs.gleason_distance(z, w) >= min_sep for w in pts):
            pts.append(z)
    return hs.PointSet(pts, label=label)
