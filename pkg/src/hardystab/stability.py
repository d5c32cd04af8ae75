"""Two-sided certified bounds for the stability modulus.

The stability modulus of a candidate set is the worst-case magnitude on a
centered subdisc of a unit-norm analytic function that stays below a
threshold on the set.  Powers of extremal weighted Blaschke products give
certified lower bounds (any feasible witness certifies); the recovery
coefficients give constructive upper estimates on a dense evaluation grid.
Both sides are assembled into reports carrying the full witnesses needed
to re-verify every number offline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .disc import (
    UNIT_WEIGHT,
    Configuration,
    QWeight,
    _circle_max,
    blaschke_abs_batch,
)
from .errors import RangeError
from .extremal import Envelope, PointSet, _fit_power, extremal_greedy, mu_value, phi
from .models import check_p
from .recovery import coefficient_matrix

_R_MIN = 1e-3
_R_MAX = 1.0 - 1e-3
_GRID_CHUNK = 8192
_INTERIOR_COMPACT_RADIUS = 0.999


def _check_radius(R: float) -> float:
    R = float(R)
    if not _R_MIN <= R <= _R_MAX:
        raise RangeError(f"radius {R} outside the supported range [{_R_MIN}, {_R_MAX}]")
    return R


def _check_eps(eps: float) -> float:
    eps = float(eps)
    if not eps > 0.0:
        raise RangeError(f"threshold must be positive, got {eps}")
    return eps


def _check_eps_nonneg(eps: float) -> float:
    eps = float(eps)
    if eps < 0.0:
        raise RangeError(f"threshold must be nonnegative, got {eps}")
    return eps


def trivial_cap(R: float, p: float) -> float:
    """The a-priori ceiling (1-R^2)^(-1/p) that no bound may exceed."""
    p = check_p(p)
    if math.isinf(p):
        return 1.0
    return (1.0 - R * R) ** (-1.0 / p)


@dataclass(frozen=True)
class AlphaCertificate:
    """Exponent making max{R^a, r^a} dominate (R+r)/(1+Rr) on r in [0,1].

    ``grid_margin`` is the smallest verified slack over the check grid;
    construction fails if it drops below -1e-12 (a numerics bug, not a
    mathematical possibility).
    """

    radius: float
    alpha: float
    grid_margin: float


def alpha_for_radius(R: float, grid_points: int = 1001) -> AlphaCertificate:
    """Closed-form dominating exponent with a grid-verified certificate.

    alpha = ln(2R/(1+R^2))/ln R binds the r <= R branch and satisfies
    R^(alpha-1) + R^(alpha+1) = 2 exactly, the equality case of the other
    branch.
    """
    R = float(R)
    if not 0.0 < R < 1.0:
        raise RangeError(f"radius must lie in (0,1), got {R}")
    alpha = math.log(2.0 * R / (1.0 + R * R)) / math.log(R)
    r = np.linspace(0.0, 1.0, grid_points)
    lhs = np.maximum(R ** alpha, r ** alpha)
    rhs = (R + r) / (1.0 + R * r)
    margin = float(np.min(lhs - rhs))
    if margin < -1e-12:
        raise RuntimeError(
            f"dominating-exponent certificate failed at R={R}: margin {margin}"
        )
    return AlphaCertificate(radius=R, alpha=alpha, grid_margin=margin)


@dataclass(frozen=True)
class LowerWitness:
    """Feasible pair certifying a lower bound: config, power, and weight."""

    config: Configuration
    s: int
    q: QWeight


def _minimal_feasible_power(m_hat: float, eps: float, s_max: int) -> Optional[int]:
    """Smallest s with m_hat^s <= eps, or None within the power budget."""
    if m_hat <= 0.0:
        return 1
    if m_hat <= eps:
        return 1
    if m_hat >= 1.0:
        return None
    s = max(1, math.ceil(math.log(eps) / math.log(m_hat)))
    while s > 1 and m_hat ** (s - 1) <= eps:
        s -= 1
    while m_hat ** s > eps:
        s += 1
        if s > s_max:
            return None
    return s if s <= s_max else None


def g_lower(E: PointSet, q: QWeight, eps: float, R: float,
            budget: tuple[int, int] = (8, 64),
            subset_budget: int = 200_000) -> tuple[float, Optional[LowerWitness]]:
    """Certified lower bound from powers of weighted Blaschke products.

    Searches configurations (all subsets for sizes whose enumeration fits
    the budget, greedy selections beyond) and, for each, the smallest
    power making the leftover magnitude drop below the threshold; the
    candidate value is (|q(0)| prod_j max{R, |z_j|})^s.  Truncating the
    search never invalidates the result: any feasible witness certifies.

    Returns (0.0, None) when nothing feasible fits the budget.
    """
    eps = _check_eps(eps)
    R = _check_radius(R)
    n_max, s_max = budget
    if n_max < 1 or s_max < 1:
        raise RangeError("budget components must be at least 1")
    N = len(E)
    pts = E.as_array()
    qabs = q.abs_batch(pts)
    q0 = q.abs_at(0.0)
    radial = np.maximum(R, np.abs(pts))

    absd = np.abs(pts[:, None] - pts[None, :]) / np.abs(
        1.0 - np.conjugate(pts[None, :]) * pts[:, None]
    )

    best = 0.0
    witness: Optional[LowerWitness] = None

    def consider(indices: tuple[int, ...], m_val: float) -> None:
        nonlocal best, witness
        s = _minimal_feasible_power(m_val / q.sup_norm, eps, s_max)
        if s is None:
            return
        prod = q0 * float(np.prod(radial[list(indices)]))
        value = (prod / q.sup_norm) ** s
        if value > best:
            best = value
            witness = LowerWitness(
                Configuration._from_valid(tuple(E.points[i] for i in indices)), s, q
            )

    for n in range(1, min(n_max, N) + 1):
        if math.comb(N, n) * N <= subset_budget:
            vals = qabs.copy()
            chosen: list[int] = []
            stack: list[np.ndarray] = []

            def explore(start: int, depth: int) -> None:
                nonlocal vals
                remaining = n - depth
                for i in range(start, N - remaining + 1):
                    chosen.append(i)
                    stack.append(vals)
                    vals = vals * absd[i]
                    if depth + 1 == n:
                        consider(tuple(chosen), float(vals.max()))
                    else:
                        explore(i + 1, depth + 1)
                    vals = stack.pop()
                    chosen.pop()

            explore(0, 0)
        else:
            record = extremal_greedy(E, q, n)
            idx = tuple(E.points.index(z) for z in record.config)
            consider(idx, record.m)

    return best, witness


def verify_lower_witness(E: PointSet, eps: float, R: float, witness: LowerWitness) -> float:
    """Recompute a witness's feasibility and certified value from scratch.

    Raises if the feasibility constraint fails; returns the certified value.
    """
    R = _check_radius(R)
    cfg, s, q = witness.config, witness.s, witness.q
    pts = E.as_array()
    m_val = float(np.max(blaschke_abs_batch(cfg, pts) * q.abs_batch(pts)))
    if (m_val / q.sup_norm) ** s > eps * (1.0 + 1e-12):
        raise RangeError(f"witness violates feasibility: ({m_val})^{s} > {eps}")
    prod = q.abs_at(0.0)
    for z in cfg:
        prod *= max(R, abs(z))
    return (prod / q.sup_norm) ** s


@dataclass(frozen=True)
class UpperRow:
    """Per-size diagnostics of the constructive upper estimate."""

    n: int
    config: Configuration
    value: float
    e_factor: float
    mu: float
    ratio: float


class UpperEstimate(tuple):
    """(value, config) pair with clamping and grid-sensitivity metadata."""

    def __new__(cls, value: float, config: Configuration, raw: float,
                clamped: bool, grid_delta: float):
        self = super().__new__(cls, (value, config))
        self.raw = raw
        self.clamped = clamped
        self.grid_delta = grid_delta
        return self

    @property
    def value(self) -> float:
        return self[0]

    @property
    def config(self) -> Configuration:
        return self[1]


def _polar_grid(R: float, grid: int) -> np.ndarray:
    """Polar grid of the closed subdisc plus a dense rim circle."""
    radii = np.linspace(0.0, R, grid)
    angles = np.exp(1j * np.linspace(0.0, 2.0 * math.pi, 2 * grid, endpoint=False))
    body = (radii[:, None] * angles[None, :]).ravel()
    rim = R * np.exp(1j * np.linspace(0.0, 2.0 * math.pi, 4 * grid, endpoint=False))
    return np.concatenate([body, rim])


def _grid_terms(cfg: Configuration, zs: np.ndarray, p: float) -> tuple[np.ndarray, np.ndarray]:
    """Coefficient l1 sums and Blaschke tails over the grid, chunked."""
    p = check_p(p)
    sums = np.empty(zs.shape, dtype=float)
    tails = np.empty(zs.shape, dtype=float)
    inv_p = 0.0 if math.isinf(p) else 1.0 / p
    for start in range(0, len(zs), _GRID_CHUNK):
        chunk = zs[start : start + _GRID_CHUNK]
        matrix = coefficient_matrix(cfg, chunk, p)
        sums[start : start + _GRID_CHUNK] = np.sum(np.abs(matrix), axis=1)
        b = blaschke_abs_batch(cfg, chunk)
        if inv_p:
            b = b / (1.0 - np.abs(chunk) ** 2) ** inv_p
        tails[start : start + _GRID_CHUNK] = b
    return sums, tails


def d_upper(cfg: Configuration, eps: float, R: float, p: float, grid: int = 256) -> float:
    """Grid maximum of eps * sum_k |c_k(z)| + |B(z)|/(1-|z|^2)^(1/p).

    Upper-estimates the stability modulus of any set containing the
    configuration's nodes, up to grid resolution.  The eps = 0 limit keeps
    only the Blaschke tail.
    """
    eps = _check_eps_nonneg(eps)
    R = _check_radius(R)
    if len(cfg) == 0:
        raise RangeError("upper estimate needs a nonempty configuration")
    sums, tails = _grid_terms(cfg, _polar_grid(R, grid), p)
    return float(np.max(eps * sums + tails))


def _e_factor(cfg: Configuration, R: float) -> float:
    out = 1.0
    for z in cfg:
        out *= (R + abs(z)) / (1.0 + abs(z) * R)
    return out


def d_upper_scan(E: PointSet, eps: float, R: float, p: float,
                 budget: tuple[int, int] = (16, 256)) -> list[UpperRow]:
    """Upper estimates for greedy configurations of every size up to the budget.

    Each row also reports the product-of-radial-averages factor and the
    inverse-separation sum of its configuration, and the ratio of the
    estimate to factor*(eps*mu+1) as a cross-check column.
    """
    eps = _check_eps_nonneg(eps)
    R = _check_radius(R)
    n_max, grid = budget
    zs = _polar_grid(R, grid)
    rows = []
    for n in range(1, min(n_max, len(E)) + 1):
        cfg = extremal_greedy(E, UNIT_WEIGHT, n).config
        sums, tails = _grid_terms(cfg, zs, p)
        value = float(np.max(eps * sums + tails))
        e_fac = _e_factor(cfg, R)
        mu = mu_value(cfg)
        rows.append(UpperRow(n=n, config=cfg, value=value, e_factor=e_fac,
                             mu=mu, ratio=value / (e_fac * (eps * mu + 1.0))))
    return rows


def d_upper_best(E: PointSet, eps: float, R: float, p: float,
                 budget: tuple[int, int] = (16, 256)) -> UpperEstimate:
    """Best (smallest) upper estimate over greedy configurations.

    Values above the trivial cap are clamped and flagged; the grid
    sensitivity of the winning configuration is reported as the change
    under halving the grid resolution.
    """
    return d_upper_sweep(E, [eps], R, p, budget)[0]


def d_upper_sweep(E: PointSet, eps_list: Sequence[float], R: float, p: float,
                  budget: tuple[int, int] = (16, 256)) -> list[UpperEstimate]:
    """Upper estimates for several thresholds sharing one set of grids.

    The grid terms are computed once per configuration; each threshold then
    takes its own maximum, so a descending threshold sweep is cheap and its
    monotonicity is term-exact.
    """
    for eps in eps_list:
        _check_eps_nonneg(eps)
    R = _check_radius(R)
    p = check_p(p)
    n_max, grid = budget
    if n_max < 1 or grid < 8:
        raise RangeError("upper-estimate budget too small")
    cap = trivial_cap(R, p)
    zs_full = _polar_grid(R, grid)
    zs_half = _polar_grid(R, max(8, grid // 2))

    configs = []
    for n in range(1, min(n_max, len(E)) + 1):
        cfg = extremal_greedy(E, UNIT_WEIGHT, n).config
        terms_full = _grid_terms(cfg, zs_full, p)
        terms_half = _grid_terms(cfg, zs_half, p)
        configs.append((cfg, terms_full, terms_half))
    if not configs:
        raise RangeError("candidate set is empty")

    out = []
    for eps in eps_list:
        best_val = math.inf
        best_cfg = None
        best_half = math.inf
        for cfg, (s_full, t_full), (s_half, t_half) in configs:
            val = float(np.max(eps * s_full + t_full))
            if val < best_val:
                best_val = val
                best_cfg = cfg
                best_half = float(np.max(eps * s_half + t_half))
        clamped = best_val > cap
        out.append(UpperEstimate(value=min(best_val, cap), config=best_cfg,
                                 raw=best_val, clamped=clamped,
                                 grid_delta=abs(best_val - best_half)))
    return out


def finite_blaschke_for_eps(E: PointSet, eps: float,
                            r_max: float = _INTERIOR_COMPACT_RADIUS) -> Configuration:
    """Shortest greedy configuration whose Blaschke product is small on E.

    Grows greedily until the plain (unweighted) leftover magnitude drops to
    the threshold; termination is guaranteed because the magnitude hits
    zero once every candidate is a node.  Candidates must stay within
    ``r_max`` of the origin (an interior-compactness requirement).
    """
    eps = _check_eps(eps)
    pts = E.as_array()
    if float(np.max(np.abs(pts))) > r_max:
        raise RangeError(f"candidate set must satisfy |z| <= {r_max}")
    N = len(E)
    vals = np.ones(N, dtype=float)
    available = np.ones(N, dtype=bool)
    chosen: list[int] = []
    if 1.0 <= eps:
        return Configuration._from_valid(())
    while True:
        masked = np.where(available, vals, -1.0)
        i = int(np.argmax(masked))
        chosen.append(i)
        available[i] = False
        vals = vals * np.abs((pts - pts[i]) / (1.0 - pts[i].conjugate() * pts))
        if float(vals.max()) <= eps:
            return Configuration._from_valid(tuple(E.points[i] for i in chosen))
        if len(chosen) == N:
            return Configuration._from_valid(tuple(E.points[i] for i in chosen))


def blaschke_disc_max(cfg: Configuration, R: float, grid: int = 2048) -> float:
    """Maximum Blaschke modulus over the closed subdisc of radius R.

    By the maximum principle the rim circle attains it; a dense rim grid
    with golden-section refinement finds it.  Always a certified lower
    bound for the true maximum (every sample is attained).
    """
    R = _check_radius(R)
    if len(cfg) == 0:
        return 1.0
    return _circle_max(lambda th: blaschke_abs_batch(cfg, R * np.exp(1j * th)), grid=grid)


@dataclass(frozen=True)
class RateBundle:
    """Power-law decay fit and its induced exponent chain."""

    prefactor: float
    sigma: float
    kappa0: float
    upper_exponent: float


@dataclass(frozen=True)
class StabilityReport:
    """Two-sided bracket of the stability modulus with full witnesses.

    ``lower`` is certified for the candidate set; ``upper`` is the
    constructive estimate (clamped at the trivial cap when flagged), exact
    for the set up to the reported grid sensitivity.
    """

    eps: float
    R: float
    p: float
    lower: float
    lower_witness: Optional[LowerWitness]
    upper: float
    upper_config: Optional[Configuration]
    cap: float
    phi_eps: Optional[float] = None
    phi_out_of_range: bool = False
    clamped: bool = False
    uninformative: bool = False
    raw_upper: float = math.nan
    grid_delta: float = math.nan
    blaschke_witness_value: Optional[float] = None
    alpha: Optional[AlphaCertificate] = None
    rate: Optional[RateBundle] = None
    log_eps_ratio: Optional[float] = None


def stability_report(E: PointSet, q: QWeight, eps: float, R: float, p: float,
                     budgets: tuple[int, int, int] = (8, 64, 256),
                     envelope: Optional[Envelope] = None) -> StabilityReport:
    """Assemble the two-sided bracket for one threshold.

    The lower bound is the better of the power-product search and, when the
    set is interior-compact, the subdisc maximum of the short Blaschke
    product built to be small on the set.  The upper estimate is the best
    constructive grid bound.  With an envelope supplied the threshold is
    also pushed through the crossing map, and a fitted decay law reports
    the exponent chain (the unnamed multiplicative constant of the upper
    bound shape is never claimed numerically).
    """
    eps = _check_eps(eps)
    R = _check_radius(R)
    p = check_p(p)
    n_max, s_max, grid = budgets

    g_val, g_wit = g_lower(E, q, eps, R, budget=(n_max, s_max))
    lower, witness = g_val, g_wit

    b_val = None
    if float(np.max(np.abs(E.as_array()))) <= _INTERIOR_COMPACT_RADIUS:
        b_cfg = finite_blaschke_for_eps(E, eps)
        b_val = blaschke_disc_max(b_cfg, R)
        if b_val > lower:
            lower = b_val
            witness = LowerWitness(b_cfg, 1, UNIT_WEIGHT)

    est = d_upper_best(E, eps, R, p, budget=(max(n_max, 2 * n_max), grid))

    cap = trivial_cap(R, p)
    phi_eps = None
    out_of_range = False
    rate = None
    log_ratio = None
    if envelope is not None:
        if eps < envelope.eps0:
            phi_eps = phi(eps, envelope)
        else:
            out_of_range = True
        positive = [(i + 1, m) for i, m in enumerate(envelope.m_samples) if m > 0.0]
        if len(positive) >= 4:
            ns, ms = zip(*positive)
            prefactor, sigma = _fit_power(ns, ms)
            if sigma > 0.0:
                kappa0 = sigma / (1.0 + sigma)
                cert = alpha_for_radius(R)
                rate = RateBundle(
                    prefactor=prefactor,
                    sigma=sigma,
                    kappa0=kappa0,
                    upper_exponent=cert.alpha / (math.floor(1.0 / kappa0) + 1.0),
                )
        if phi_eps is not None and 0.0 < phi_eps < 1.0 and eps < 1.0:
            log_ratio = math.log(eps) / math.log(phi_eps)

    return StabilityReport(
        eps=eps,
        R=R,
        p=p,
        lower=lower,
        lower_witness=witness,
        upper=est.value,
        upper_config=est.config,
        cap=cap,
        phi_eps=phi_eps,
        phi_out_of_range=out_of_range,
        clamped=est.clamped,
        uninformative=eps >= 1.0,
        raw_upper=est.raw,
        grid_delta=est.grid_delta,
        blaschke_witness_value=b_val,
        alpha=alpha_for_radius(R),
        rate=rate,
        log_eps_ratio=log_ratio,
    )
