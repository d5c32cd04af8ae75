"""Geometry of the unit disc.

Pseudo-hyperbolic (Gleason) distance, finite Blaschke products with and
without a single excluded factor, the exponential decay bound on their
moduli, and unit-sup-norm boundary weights used to tame candidate sets
that touch the circle.

Points are plain complex numbers.  Constructors and operations validate
membership in the closed disc; operations that need interior points
reject boundary input.
"""

from __future__ import annotations

import cmath
import math
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import DomainError

#: Minimum pseudo-hyperbolic separation between nodes of a configuration.
DISTINCT_TOL = 1e-9

#: Above this many nodes, Blaschke products switch from a direct complex
#: product to log-magnitude plus accumulated-phase evaluation.
_DIRECT_PRODUCT_MAX = 64

#: Above this many nodes, construction checks exact duplicates only
#: (the full pairwise separation check is quadratic).
_FULL_CHECK_MAX = 4096

_BOUNDARY_SLACK = 1e-12


def _as_complex(z) -> complex:
    return complex(z)


def require_disc(z: complex, what: str = "point") -> complex:
    """Validate membership in the closed unit disc."""
    z = _as_complex(z)
    if abs(z) > 1.0 + _BOUNDARY_SLACK:
        raise DomainError(f"{what} {z} lies outside the closed unit disc")
    return z


def require_interior(z: complex, what: str = "point") -> complex:
    """Validate strict membership in the open unit disc."""
    z = _as_complex(z)
    if abs(z) >= 1.0:
        raise DomainError(f"{what} {z} must lie strictly inside the unit disc")
    return z


def gleason_distance(z: complex, w: complex) -> float:
    """Pseudo-hyperbolic distance |(z-w)/(1-conj(w)z)| between interior points.

    Symmetric (exactly, also in floating point: the two moduli are computed
    from conjugate quantities), zero exactly at coincidence, and invariant
    under disc automorphisms.  Boundary or exterior input is rejected.
    """
    z = require_interior(z, "first argument")
    w = require_interior(w, "second argument")
    return abs(z - w) / abs(1.0 - w.conjugate() * z)


class Configuration:
    """Ordered tuple of distinct interior nodes.

    Distinctness means pairwise pseudo-hyperbolic separation of at least
    ``min_separation`` (default ``DISTINCT_TOL``).  Beyond ``_FULL_CHECK_MAX``
    nodes only exact duplicates are rejected; the quadratic check is skipped.
    """

    __slots__ = ("_nodes", "_array")

    def __init__(self, nodes: Iterable[complex], min_separation: float = DISTINCT_TOL):
        nodes = tuple(require_interior(z, "configuration node") for z in nodes)
        n = len(nodes)
        if n <= _FULL_CHECK_MAX:
            for i in range(n):
                for j in range(i + 1, n):
                    if gleason_distance(nodes[i], nodes[j]) < min_separation:
                        raise DomainError(
                            f"nodes {nodes[i]} and {nodes[j]} are closer than "
                            f"the minimum separation {min_separation}"
                        )
        else:
            if len(set(nodes)) != n:
                raise DomainError("configuration contains duplicate nodes")
        self._nodes = nodes
        self._array = None

    @classmethod
    def _from_valid(cls, nodes: tuple[complex, ...]) -> "Configuration":
        cfg = cls.__new__(cls)
        cfg._nodes = nodes
        cfg._array = None
        return cfg

    @property
    def nodes(self) -> tuple[complex, ...]:
        return self._nodes

    def as_array(self) -> np.ndarray:
        if self._array is None:
            self._array = np.asarray(self._nodes, dtype=complex)
        return self._array

    def without(self, k: int) -> "Configuration":
        """Configuration with node ``k`` removed (0-based index)."""
        self._check_index(k)
        return Configuration._from_valid(self._nodes[:k] + self._nodes[k + 1 :])

    def _check_index(self, k: int) -> None:
        if not 0 <= k < len(self._nodes):
            raise IndexError(f"node index {k} out of range for {len(self._nodes)} nodes")

    def __len__(self) -> int:
        return len(self._nodes)

    def __iter__(self) -> Iterator[complex]:
        return iter(self._nodes)

    def __getitem__(self, k: int) -> complex:
        return self._nodes[k]

    def __eq__(self, other) -> bool:
        return isinstance(other, Configuration) and self._nodes == other._nodes

    def __hash__(self) -> int:
        return hash(self._nodes)

    def __repr__(self) -> str:
        return f"Configuration({list(self._nodes)!r})"


EMPTY_CONFIGURATION = Configuration._from_valid(())


def blaschke_eval(cfg: Configuration, z: complex) -> complex:
    """Finite Blaschke product with zeros at the configuration's nodes.

    The empty configuration evaluates to 1.  Defined on the closed disc;
    the modulus is strictly below 1 for interior z and nonempty cfg.
    """
    z = require_disc(z)
    n = len(cfg)
    if n == 0:
        return 1.0 + 0.0j
    if n <= _DIRECT_PRODUCT_MAX:
        out = 1.0 + 0.0j
        for w in cfg:
            out *= (z - w) / (1.0 - w.conjugate() * z)
        return out
    nodes = cfg.as_array()
    num = z - nodes
    den = 1.0 - nodes.conjugate() * z
    log_mag = float(np.sum(np.log(np.abs(num))) - np.sum(np.log(np.abs(den))))
    if log_mag == -math.inf:
        return 0.0 + 0.0j
    phase = float(np.sum(np.angle(num)) - np.sum(np.angle(den)))
    return cmath.rect(math.exp(log_mag), phase)


def blaschke_log_abs(cfg: Configuration, z: complex) -> float:
    """log|blaschke_eval(cfg, z)| computed without underflow.

    Returns -inf when z coincides with a node; 0.0 for the empty product.
    Safe for configurations with up to ~10^6 nodes.
    """
    z = require_disc(z)
    if len(cfg) == 0:
        return 0.0
    nodes = cfg.as_array()
    num = np.abs(z - nodes)
    den = np.abs(1.0 - nodes.conjugate() * z)
    with np.errstate(divide="ignore"):
        return float(np.sum(np.log(num)) - np.sum(np.log(den)))


def blaschke_eval_excluding(cfg: Configuration, k: int, z: complex) -> complex:
    """Blaschke product over all nodes except node ``k`` (0-based)."""
    cfg._check_index(k)
    return blaschke_eval(cfg.without(k), z)


def blaschke_abs_batch(cfg: Configuration, zs: np.ndarray) -> np.ndarray:
    """|blaschke_eval| over an array of points, vectorised over the points."""
    zs = np.asarray(zs, dtype=complex)
    out = np.ones(zs.shape, dtype=float)
    for w in cfg:
        out *= np.abs((zs - w) / (1.0 - w.conjugate() * zs))
    return out


def blaschke_excluded_at_nodes(cfg: Configuration) -> np.ndarray:
    """For every k, the product over j != k evaluated at node k.

    These are the denominators of the recovery coefficients and the
    reciprocals summed by the inverse-separation statistic.
    """
    nodes = cfg.as_array()
    n = len(nodes)
    denom = np.ones(n, dtype=complex)
    for j in range(n):
        w = nodes[j]
        factors = (nodes - w) / (1.0 - w.conjugate() * nodes)
        factors[j] = 1.0
        denom *= factors
    return denom


def blaschke_upper_bound(cfg: Configuration, z: complex, excluded: int | None = None) -> float:
    """Exponential ceiling for the Blaschke modulus.

    Returns exp(-(1-|z|^2)/4 * sum_j (1-|z_j|)), doubled when one factor is
    excluded.  Valid on the closed disc and always at least the true modulus
    of ``blaschke_eval`` (respectively ``blaschke_eval_excluding``).
    """
    z = require_disc(z)
    if excluded is not None:
        cfg._check_index(excluded)
    mass = sum(1.0 - abs(w) for w in cfg)
    factor = max(0.0, 1.0 - abs(z) ** 2) / 4.0
    bound = math.exp(-factor * mass)
    return 2.0 * bound if excluded is not None else bound


def _circle_max(abs_on_circle, grid: int = 4096, theta_tol: float = 1e-12,
                near_tie: float = 1e-3) -> float:
    """Maximum of a smooth nonnegative function of the angle on the circle.

    Coarse uniform grid followed by golden-section refinement of every cell
    whose sampled value comes within ``near_tie`` of the best cell (guards
    against near-tied peaks falling into different cells).
    """
    thetas = np.linspace(0.0, 2.0 * math.pi, grid, endpoint=False)
    values = abs_on_circle(thetas)
    best = float(values.max())
    step = 2.0 * math.pi / grid
    invphi = (math.sqrt(5.0) - 1.0) / 2.0

    def refine(center: float) -> float:
        a, b = center - step, center + step
        h = b - a
        c, d = b - invphi * h, a + invphi * h
        fc = float(abs_on_circle(np.array([c]))[0])
        fd = float(abs_on_circle(np.array([d]))[0])
        while h > theta_tol:
            if fc > fd:
                b, d, fd = d, c, fc
                h = b - a
                c = b - invphi * h
                fc = float(abs_on_circle(np.array([c]))[0])
            else:
                a, c, fc = c, d, fd
                h = b - a
                d = a + invphi * h
                fd = float(abs_on_circle(np.array([d]))[0])
        return max(fc, fd)

    candidates = np.nonzero(values >= best - near_tie)[0]
    # cap the number of refinements; keep the strongest cells
    if candidates.size > 64:
        order = np.argsort(values[candidates])[::-1]
        candidates = candidates[order[:64]]
    result = best
    for idx in candidates:
        result = max(result, refine(float(thetas[idx])))
    return result


class QWeight:
    """Weight with unit sup-norm on the closed disc.

    The unit weight is identically 1.  A boundary-polynomial weight is the
    monic polynomial vanishing at prescribed unimodular anchors, scaled so
    its boundary maximum of modulus equals 1 (by the maximum principle the
    disc sup equals the boundary sup).
    """

    __slots__ = ("_anchors", "_normalizer")

    def __init__(self, anchors: Sequence[complex] = (), normalizer: float = 1.0):
        self._anchors = tuple(complex(a) for a in anchors)
        if self._anchors and normalizer <= 0.0:
            raise DomainError("normalizer must be positive")
        self._normalizer = float(normalizer)

    @property
    def kind(self) -> str:
        return "unit" if not self._anchors else "boundary_polynomial"

    @property
    def is_unit(self) -> bool:
        return not self._anchors

    @property
    def anchors(self) -> tuple[complex, ...]:
        return self._anchors

    @property
    def normalizer(self) -> float:
        return self._normalizer

    @property
    def sup_norm(self) -> float:
        """Sup of |q| over the closed disc; 1 by construction."""
        return 1.0

    def __call__(self, z: complex) -> complex:
        if not self._anchors:
            return 1.0 + 0.0j
        z = require_disc(z, "weight argument")
        out = 1.0 + 0.0j
        for a in self._anchors:
            out *= z - a
        return out / self._normalizer

    def abs_at(self, z: complex) -> float:
        return abs(self(z))

    def abs_batch(self, zs: np.ndarray) -> np.ndarray:
        zs = np.asarray(zs, dtype=complex)
        if not self._anchors:
            return np.ones(zs.shape, dtype=float)
        out = np.ones(zs.shape, dtype=float)
        for a in self._anchors:
            out *= np.abs(zs - a)
        return out / self._normalizer

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, QWeight)
            and self._anchors == other._anchors
            and self._normalizer == other._normalizer
        )

    def __hash__(self) -> int:
        return hash((self._anchors, self._normalizer))

    def __repr__(self) -> str:
        if self.is_unit:
            return "QWeight()"
        return f"QWeight(anchors={list(self._anchors)!r}, normalizer={self._normalizer!r})"


UNIT_WEIGHT = QWeight()


def q_build_boundary_poly(anchors: Sequence[complex]) -> QWeight:
    """Build the unit-sup-norm weight vanishing at the given boundary anchors.

    The normalizer is the boundary maximum of the raw polynomial modulus,
    found on a 4096-point uniform grid and sharpened by golden-section
    refinement of the strongest cells.  Empty anchor list yields the unit
    weight.
    """
    anchors = [complex(a) for a in anchors]
    for a in anchors:
        if abs(abs(a) - 1.0) > 1e-12:
            raise DomainError(f"anchor {a} is not unimodular")
    if not anchors:
        return UNIT_WEIGHT
    arr = np.asarray(anchors, dtype=complex)

    def abs_on_circle(thetas: np.ndarray) -> np.ndarray:
        zs = np.exp(1j * thetas)
        out = np.ones(zs.shape, dtype=float)
        for a in arr:
            out *= np.abs(zs - a)
        return out

    normalizer = _circle_max(abs_on_circle)
    return QWeight(anchors, normalizer)


def bq_eval(cfg: Configuration, q: QWeight, z: complex, excluded: int | None = None) -> complex:
    """Weighted Blaschke product: the plain product times the weight at z."""
    if excluded is None:
        b = blaschke_eval(cfg, z)
    else:
        b = blaschke_eval_excluding(cfg, excluded, z)
    return b * q(z)
