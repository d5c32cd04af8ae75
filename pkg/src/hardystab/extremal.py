"""Extremal node selection on finite candidate sets.

The successive-product score of an ordered tuple of nodes, the
inverse-separation sum, and the largest leftover weighted-Blaschke
magnitude on the candidate set; exhaustive and greedy searches for the
score's maximizers; the non-increasing decay envelope of the leftover
magnitudes and its threshold inverse; and an empirical power-law fit of
the decay.

All suprema and infima are taken over the finite candidate set, so every
computed quantity is exact for that set and a one-sided bound for any
superset.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .disc import (
    DISTINCT_TOL,
    UNIT_WEIGHT,
    Configuration,
    QWeight,
    blaschke_excluded_at_nodes,
    bq_eval,
    gleason_distance,
    require_interior,
)
from .errors import BudgetExceededError, RangeError

#: Relative tolerance within which score values count as tied maximizers.
TIE_REL_TOL = 1e-12


class PointSet:
    """Finite candidate set of distinct interior points.

    Duplicates (pseudo-hyperbolic separation below ``DISTINCT_TOL``) are
    dropped at construction, keeping first occurrences; the drop count is
    recorded.
    """

    __slots__ = ("_points", "label", "dropped", "_array")

    def __init__(self, points: Iterable[complex], label: str = ""):
        raw = [require_interior(z, "candidate point") for z in points]
        kept: list[complex] = []
        dropped = 0
        for z in raw:
            if any(gleason_distance(z, w) < DISTINCT_TOL for w in kept):
                dropped += 1
            else:
                kept.append(z)
        if not kept:
            raise RangeError("candidate set must contain at least one point")
        self._points = tuple(kept)
        self.label = label
        self.dropped = dropped
        self._array = None

    @property
    def points(self) -> tuple[complex, ...]:
        return self._points

    def as_array(self) -> np.ndarray:
        if self._array is None:
            self._array = np.asarray(self._points, dtype=complex)
        return self._array

    def __len__(self) -> int:
        return len(self._points)

    def __iter__(self):
        return iter(self._points)

    def __repr__(self) -> str:
        return f"PointSet({list(self._points)!r}, label={self.label!r})"


@dataclass(frozen=True)
class ExtremalRecord:
    """One search result: the selected configuration and its statistics.

    ``v`` is the score maximum found, ``m`` the smallest leftover magnitude
    and ``mu`` the smallest inverse-separation sum among the tied score
    maximizers (for the exhaustive method these are the exact set values;
    the stored configuration attains ``m``, with ties broken by ``mu`` and
    then enumeration order).  Greedy records certify ``v`` as a lower bound
    for the true maximum.
    """

    n: int
    config: Configuration
    v: float
    m: float
    mu: float
    method: str


def v_value(cfg: Configuration, q: QWeight = UNIT_WEIGHT) -> float:
    """Successive-product score: prod_j |B_q(first j-1 nodes, node j)|.

    Permutation invariant and equal to the product of all pairwise
    pseudo-hyperbolic distances times the weight moduli at the nodes.
    Empty configuration scores 1.
    """
    nodes = cfg.nodes
    out = 1.0
    for j, z in enumerate(nodes):
        prefix = Configuration._from_valid(nodes[:j])
        out *= abs(bq_eval(prefix, q, z))
    return out


def mu_value(cfg: Configuration) -> float:
    """Inverse-separation sum: sum_k 1/|B_k(nodes, node k)|.

    Equals 1 for a single node (empty excluded product).
    """
    if len(cfg) == 0:
        raise RangeError("inverse-separation sum needs at least one node")
    denom = np.abs(blaschke_excluded_at_nodes(cfg))
    return float(np.sum(1.0 / denom))


def m_value(cfg: Configuration, E: PointSet, q: QWeight = UNIT_WEIGHT) -> float:
    """Largest weighted-Blaschke magnitude left on the candidate set."""
    pts = E.as_array()
    vals = q.abs_batch(pts)
    for w in cfg:
        vals *= np.abs((pts - w) / (1.0 - w.conjugate() * pts))
    return float(vals.max())


def _log_tables(E: PointSet, q: QWeight) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Pairwise |distance| matrix, its log (zero diagonal), and log|q|."""
    pts = E.as_array()
    diff = np.abs(pts[:, None] - pts[None, :])
    denom = np.abs(1.0 - np.conjugate(pts[None, :]) * pts[:, None])
    absd = diff / denom
    logd = np.zeros_like(absd)
    mask = ~np.eye(len(pts), dtype=bool)
    logd[mask] = np.log(absd[mask])
    logq = np.log(q.abs_batch(pts))
    return absd, logd, logq


def extremal_exhaustive(E: PointSet, q: QWeight, n: int,
                        subset_budget: int = 10_000_000) -> ExtremalRecord:
    """Exact search over all n-subsets of the candidate set.

    Finds the score maximum, then among maximizers tied within relative
    ``TIE_REL_TOL`` takes the minimum leftover magnitude and the minimum
    inverse-separation sum.  Unordered subsets suffice because the score
    is permutation invariant.
    """
    N = len(E)
    if not 1 <= n <= N:
        raise RangeError(f"subset size {n} out of range for {N} candidates")
    count = math.comb(N, n)
    if count > subset_budget:
        raise BudgetExceededError(
            f"{count} subsets of size {n} exceed the budget {subset_budget}; "
            "use the greedy search instead",
            count=count,
            budget=subset_budget,
        )
    _, logd, logq = _log_tables(E, q)
    tol = TIE_REL_TOL

    best = -math.inf
    ties: list[tuple[float, tuple[int, ...]]] = []
    chosen: list[int] = []
    acc = np.zeros(N)
    levels = [0.0] * (n + 1)

    def visit(logv: float) -> None:
        nonlocal best
        if logv > best:
            best = logv
            ties[:] = [(lv, ix) for lv, ix in ties if lv >= best - tol]
        if logv >= best - tol:
            ties.append((logv, tuple(chosen)))

    def explore(start: int, depth: int) -> None:
        remaining = n - depth
        for i in range(start, N - remaining + 1):
            logv = levels[depth] + acc[i] + logq[i]
            chosen.append(i)
            if depth + 1 == n:
                visit(logv)
            else:
                levels[depth + 1] = logv
                np.add(acc, logd[i], out=acc)
                explore(i + 1, depth + 1)
                np.subtract(acc, logd[i], out=acc)
            chosen.pop()

    explore(0, 0)
    ties[:] = [(lv, ix) for lv, ix in ties if lv >= best - tol]

    pts = E.points
    stats = []
    for _, idx in ties:
        cfg = Configuration._from_valid(tuple(pts[i] for i in idx))
        stats.append((m_value(cfg, E, q), mu_value(cfg), cfg))
    m_n = min(s[0] for s in stats)
    mu_n = min(s[1] for s in stats)
    _, _, config = min(enumerate(stats), key=lambda t: (t[1][0], t[1][1], t[0]))[1]
    return ExtremalRecord(n=n, config=config, v=v_value(config, q), m=m_n,
                          mu=mu_n, method="exhaustive")


def extremal_greedy(E: PointSet, q: QWeight, n: int) -> ExtremalRecord:
    """One-pass greedy selection maximizing each successive factor.

    The first node maximizes |q| over the candidates; each later node
    maximizes the weighted Blaschke magnitude of the nodes chosen so far.
    Ties break toward the lowest point index, so results are
    schedule-independent.  The recorded score certifies a lower bound for
    the exhaustive maximum.
    """
    N = len(E)
    if not 1 <= n <= N:
        raise RangeError(f"selection size {n} out of range for {N} candidates")
    pts = E.as_array()
    vals = q.abs_batch(pts)
    available = np.ones(N, dtype=bool)
    chosen: list[int] = []
    score = 1.0
    for _ in range(n):
        masked = np.where(available, vals, -1.0)
        i = int(np.argmax(masked))
        score *= float(vals[i])
        chosen.append(i)
        available[i] = False
        vals = vals * np.abs((pts - pts[i]) / (1.0 - pts[i].conjugate() * pts))
    config = Configuration._from_valid(tuple(E.points[i] for i in chosen))
    return ExtremalRecord(n=n, config=config, v=v_value(config, q),
                          m=m_value(config, E, q), mu=mu_value(config),
                          method="greedy")


def maximizer_sup_margin(record: ExtremalRecord, E: PointSet, q: QWeight) -> float:
    """Soft diagnostic: how far the stored configuration is from the
    stationarity property of true maximizers.

    For each node, the candidate-set supremum of the excluded weighted
    product should be attained at the node itself; the returned margin is
    the largest excess of the supremum over the node value (always >= 0;
    near 0 for exact maximizers up to ties).
    """
    cfg = record.config
    pts = E.as_array()
    worst = 0.0
    for k, z in enumerate(cfg):
        rest = cfg.without(k)
        vals = q.abs_batch(pts)
        for w in rest:
            vals *= np.abs((pts - w) / (1.0 - w.conjugate() * pts))
        at_node = abs(bq_eval(cfg, q, z, excluded=k))
        worst = max(worst, float(vals.max()) - at_node)
    return worst


@dataclass(frozen=True)
class Envelope:
    """Non-increasing ceiling h for the leftover magnitudes.

    ``heights[i]`` is h(i+1), the running maximum of the recorded leftover
    magnitudes from index i+1 onward.  Between integers h interpolates
    linearly; beyond the horizon it stays constant (the conservative
    extension).  ``exact`` marks envelopes built purely from exhaustive
    records; greedy inputs are surrogates.
    """

    heights: tuple[float, ...]
    m_samples: tuple[float, ...]
    exact: bool

    def __call__(self, x: float) -> float:
        N = len(self.heights)
        if x <= 1.0:
            return self.heights[0]
        if x >= N:
            return self.heights[-1]
        lo = int(math.floor(x))
        frac = x - lo
        return self.heights[lo - 1] * (1.0 - frac) + self.heights[lo] * frac

    @property
    def horizon(self) -> int:
        return len(self.heights)

    @property
    def eps0(self) -> float:
        """Upper end of the admissible threshold range: h(1)/2."""
        return self.heights[0] / 2.0


def envelope_build(records: Sequence[ExtremalRecord]) -> Envelope:
    """Suffix-maximum envelope of the recorded leftover magnitudes.

    Records must cover n = 1..N contiguously.  Greedy records are allowed
    but mark the envelope as inexact.
    """
    if not records:
        raise RangeError("cannot build an envelope from no records")
    ordered = sorted(records, key=lambda r: r.n)
    ns = [r.n for r in ordered]
    if ns != list(range(1, len(ns) + 1)):
        raise RangeError(f"records must cover n = 1..N contiguously, got {ns}")
    ms = [r.m for r in ordered]
    heights = list(ms)
    for i in range(len(heights) - 2, -1, -1):
        heights[i] = max(heights[i], heights[i + 1])
    exact = all(r.method == "exhaustive" for r in ordered)
    return Envelope(tuple(heights), tuple(ms), exact)


def phi(eps: float, env: Envelope) -> float:
    """Envelope value at the crossing where eps equals h(x)/(x+1).

    The map x -> h(x)/(x+1) decreases strictly (h is non-increasing and
    positive near 1), so monotone bisection finds the unique crossing for
    any eps below h(1)/2; the returned h(x) is non-decreasing in eps.
    """
    if eps <= 0.0:
        raise RangeError("threshold must be positive")
    eps0 = env.eps0
    if eps >= eps0:
        raise RangeError(f"threshold {eps} is not below the admissible bound {eps0}")

    def quotient(x: float) -> float:
        return env(x) / (x + 1.0)

    lo = 1.0
    hi = 2.0
    while quotient(hi) > eps:
        hi *= 2.0
        if hi > 1e18:
            raise RangeError("no crossing found; envelope does not decay")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        val = quotient(mid)
        if abs(val - eps) <= 1e-12:
            lo = hi = mid
            break
        if val > eps:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-14 * max(1.0, lo):
            break
    return env(0.5 * (lo + hi))


def _fit_power(ns: Sequence[int], ms: Sequence[float]) -> tuple[float, float]:
    """Majorizing power law C n^(-sigma) through log-log least squares."""
    logn = np.log(np.asarray(ns, dtype=float))
    logm = np.log(np.asarray(ms, dtype=float))
    slope, intercept = np.polyfit(logn, logm, 1)
    sigma = -float(slope)
    log_c = float(np.max(logm + sigma * logn))
    return math.exp(log_c), sigma


def rate_fit(records: Sequence[ExtremalRecord], n_min: int = 1) -> tuple[float, float]:
    """Fit M_n <= C n^(-sigma) to the recorded leftover magnitudes.

    Least squares on log-log over n >= n_min, with the prefactor raised so
    the law majorizes every sample.  Zero magnitudes are dropped with a
    warning.  Purely diagnostic.
    """
    pairs = [(r.n, r.m) for r in records if r.n >= n_min]
    zeros = [n for n, m in pairs if m <= 0.0]
    if zeros:
        warnings.warn(f"dropping n={zeros} with zero leftover magnitude from the fit")
        pairs = [(n, m) for n, m in pairs if m > 0.0]
    if len(pairs) < 4:
        raise RangeError("need at least 4 records with positive magnitude to fit")
    ns, ms = zip(*pairs)
    return _fit_power(ns, ms)
