"""Analytic test functions on the unit disc with known p-norms.

Each model evaluates anywhere inside the disc and reports its Hardy norm
either in closed form (where one exists) or by boundary quadrature on
circles approaching the boundary, with a declared uncertainty from the
extrapolation step.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .disc import Configuration, _circle_max, blaschke_eval, require_disc, require_interior
from .errors import DomainError, RangeError

_QUAD_RADII = (0.99, 0.999, 0.9999)
_QUAD_POINTS = 2 ** 14


def check_p(p: float) -> float:
    """Validate a Hardy exponent: a real number >= 1, infinity allowed."""
    p = float(p)
    if math.isnan(p) or p < 1.0:
        raise RangeError(f"Hardy exponent must satisfy p >= 1, got {p}")
    return p


class HardyModel:
    """Base class; subclasses implement evaluation and norm metadata."""

    def evaluate(self, z: complex) -> complex:
        raise NotImplementedError

    def evaluate_batch(self, zs: np.ndarray) -> np.ndarray:
        zs = np.asarray(zs, dtype=complex)
        return np.asarray([self.evaluate(z) for z in zs.ravel()], dtype=complex).reshape(zs.shape)

    @property
    def is_inner(self) -> bool:
        """True when the boundary modulus is 1 almost everywhere."""
        return False

    def analytic_norm(self, p: float) -> float | None:
        """Closed-form norm when available, else None."""
        return None

    def hp_norm(self, p: float) -> float:
        return self.hp_norm_with_uncertainty(p)[0]

    def hp_norm_with_uncertainty(self, p: float) -> tuple[float, float]:
        p = check_p(p)
        exact = self.analytic_norm(p)
        if exact is not None:
            return exact, 0.0
        if math.isinf(p):
            raise RangeError(f"{type(self).__name__} has no sup-norm recipe")
        return _norm_by_quadrature(self, p)

    def __call__(self, z: complex) -> complex:
        return self.evaluate(z)

    def to_dict(self) -> dict:
        raise NotImplementedError


def _c2l(z: complex) -> list[float]:
    return [z.real, z.imag]


def _l2c(pair) -> complex:
    return complex(pair[0], pair[1])


@dataclass(frozen=True)
class Monomial(HardyModel):
    """z**k; unit norm for every p."""

    degree: int

    def __post_init__(self):
        if self.degree < 0:
            raise RangeError("monomial degree must be nonnegative")

    def evaluate(self, z: complex) -> complex:
        return require_interior(z) ** self.degree

    def evaluate_batch(self, zs: np.ndarray) -> np.ndarray:
        return np.asarray(zs, dtype=complex) ** self.degree

    @property
    def is_inner(self) -> bool:
        return True

    def analytic_norm(self, p: float) -> float | None:
        return 1.0

    def to_dict(self) -> dict:
        return {"variant": "monomial", "degree": self.degree}


class FiniteBlaschke(HardyModel):
    """Rotation times the Blaschke product over a configuration; sup-norm 1."""

    def __init__(self, config: Configuration, rotation: complex = 1.0):
        rotation = complex(rotation)
        if abs(abs(rotation) - 1.0) > 1e-12:
            raise DomainError(f"rotation {rotation} is not unimodular")
        self.config = config
        self.rotation = rotation

    def evaluate(self, z: complex) -> complex:
        return self.rotation * blaschke_eval(self.config, z)

    def evaluate_batch(self, zs: np.ndarray) -> np.ndarray:
        zs = np.asarray(zs, dtype=complex)
        out = np.full(zs.shape, self.rotation, dtype=complex)
        for w in self.config:
            out *= (zs - w) / (1.0 - w.conjugate() * zs)
        return out

    @property
    def is_inner(self) -> bool:
        return True

    def analytic_norm(self, p: float) -> float | None:
        return 1.0 if math.isinf(p) else None

    def to_dict(self) -> dict:
        return {
            "variant": "finite_blaschke",
            "nodes": [_c2l(z) for z in self.config],
            "rotation": _c2l(self.rotation),
        }

    def __repr__(self) -> str:
        return f"FiniteBlaschke({self.config!r}, rotation={self.rotation!r})"


@dataclass(frozen=True)
class ReproducingKernelPole(HardyModel):
    """1/(1 - conj(a) z): the evaluation kernel anchored at an interior point."""

    pole: complex

    def __post_init__(self):
        require_interior(self.pole, "kernel anchor")

    def evaluate(self, z: complex) -> complex:
        return 1.0 / (1.0 - self.pole.conjugate() * require_interior(z))

    def evaluate_batch(self, zs: np.ndarray) -> np.ndarray:
        return 1.0 / (1.0 - self.pole.conjugate() * np.asarray(zs, dtype=complex))

    def analytic_norm(self, p: float) -> float | None:
        a = abs(self.pole)
        if math.isinf(p):
            return 1.0 / (1.0 - a)
        if p == 2.0:
            return 1.0 / math.sqrt(1.0 - a * a)
        return None

    def to_dict(self) -> dict:
        return {"variant": "reproducing_kernel", "pole": _c2l(complex(self.pole))}


class Polynomial(HardyModel):
    """sum_k coeffs[k] z^k; the p=2 norm is the coefficient l2 norm."""

    def __init__(self, coeffs: Sequence[complex]):
        self.coeffs = tuple(complex(c) for c in coeffs)

    def evaluate(self, z: complex) -> complex:
        z = require_disc(z)
        out = 0.0 + 0.0j
        for c in reversed(self.coeffs):
            out = out * z + c
        return out

    def evaluate_batch(self, zs: np.ndarray) -> np.ndarray:
        zs = np.asarray(zs, dtype=complex)
        out = np.zeros(zs.shape, dtype=complex)
        for c in reversed(self.coeffs):
            out = out * zs + c
        return out

    def analytic_norm(self, p: float) -> float | None:
        if p == 2.0:
            return math.sqrt(sum(abs(c) ** 2 for c in self.coeffs))
        if math.isinf(p):
            # boundary maximum of a polynomial modulus: grid plus refinement
            return _circle_max(lambda th: np.abs(self.evaluate_batch(np.exp(1j * th))))
        return None

    def to_dict(self) -> dict:
        return {"variant": "polynomial", "coeffs": [_c2l(c) for c in self.coeffs]}

    def __repr__(self) -> str:
        return f"Polynomial({list(self.coeffs)!r})"


@dataclass(frozen=True)
class SingularInner(HardyModel):
    """exp(-mass (b+z)/(b-z)) for a unimodular b: boundary modulus 1, no zeros."""

    mass: float
    boundary: complex

    def __post_init__(self):
        if self.mass <= 0.0:
            raise RangeError("mass must be positive")
        if abs(abs(self.boundary) - 1.0) > 1e-12:
            raise DomainError(f"boundary point {self.boundary} is not unimodular")

    def evaluate(self, z: complex) -> complex:
        z = require_interior(z)
        b = complex(self.boundary)
        return cmath.exp(-self.mass * (b + z) / (b - z))

    def evaluate_batch(self, zs: np.ndarray) -> np.ndarray:
        zs = np.asarray(zs, dtype=complex)
        b = complex(self.boundary)
        return np.exp(-self.mass * (b + zs) / (b - zs))

    @property
    def is_inner(self) -> bool:
        return True

    def analytic_norm(self, p: float) -> float | None:
        return 1.0 if math.isinf(p) else None

    def to_dict(self) -> dict:
        return {
            "variant": "singular_inner",
            "mass": self.mass,
            "boundary": _c2l(complex(self.boundary)),
        }


class Product(HardyModel):
    """Pointwise product of models.

    The sup-norm metadata is the product of the factors' sup-norms: exact
    when every factor is inner, an upper bound otherwise.
    """

    def __init__(self, factors: Sequence[HardyModel]):
        self.factors = tuple(factors)
        if not self.factors:
            raise RangeError("product needs at least one factor")

    def evaluate(self, z: complex) -> complex:
        out = 1.0 + 0.0j
        for f in self.factors:
            out *= f.evaluate(z)
        return out

    def evaluate_batch(self, zs: np.ndarray) -> np.ndarray:
        zs = np.asarray(zs, dtype=complex)
        out = np.ones(zs.shape, dtype=complex)
        for f in self.factors:
            out *= f.evaluate_batch(zs)
        return out

    @property
    def is_inner(self) -> bool:
        return all(f.is_inner for f in self.factors)

    def analytic_norm(self, p: float) -> float | None:
        if math.isinf(p):
            norms = [f.analytic_norm(math.inf) for f in self.factors]
            if all(v is not None for v in norms):
                return math.prod(norms)
        return None

    def to_dict(self) -> dict:
        return {"variant": "product", "factors": [f.to_dict() for f in self.factors]}

    def __repr__(self) -> str:
        return f"Product({list(self.factors)!r})"


def _norm_by_quadrature(model: HardyModel, p: float) -> tuple[float, float]:
    """Circle means at three radii, extrapolated toward the boundary.

    Trapezoid rule on 2^14 equispaced angles per radius.  When the three
    means behave geometrically the limit is extrapolated and the applied
    correction is declared as the uncertainty; otherwise the last mean is
    returned with the last increment as uncertainty.
    """
    thetas = np.linspace(0.0, 2.0 * math.pi, _QUAD_POINTS, endpoint=False)
    boundary = np.exp(1j * thetas)
    means = []
    for r in _QUAD_RADII:
        vals = np.abs(model.evaluate_batch(r * boundary))
        means.append(float(np.mean(vals ** p) ** (1.0 / p)))
    m1, m2, m3 = means
    d1, d2 = m2 - m1, m3 - m2
    if d1 * d2 > 0.0 and abs(d2) < abs(d1):
        rho = d2 / d1
        delta = d2 * rho / (1.0 - rho)
        return m3 + delta, abs(delta)
    return m3, abs(d2)


def model_eval(m: HardyModel, z: complex) -> complex:
    """Evaluate a model at an interior point."""
    return m.evaluate(z)


def model_hp_norm(m: HardyModel, p: float) -> float:
    """Hardy norm of a model: closed form where known, quadrature otherwise."""
    return m.hp_norm(p)


def model_to_dict(m: HardyModel) -> dict:
    return m.to_dict()


def model_from_dict(data: dict, input_points: Sequence[complex] | None = None) -> HardyModel:
    """Rebuild a model from its JSON fragment.

    ``nodes: "input"`` in a finite_blaschke fragment pulls the nodes from
    ``input_points`` (the CLI wires the input file through here).
    """
    variant = data.get("variant")
    if variant == "monomial":
        return Monomial(int(data["degree"]))
    if variant == "finite_blaschke":
        nodes = data.get("nodes", "input")
        if nodes == "input":
            if input_points is None:
                raise RangeError("model requests input nodes but none were supplied")
            cfg = Configuration(input_points)
        else:
            cfg = Configuration(_l2c(pair) for pair in nodes)
        rotation = _l2c(data.get("rotation", [1.0, 0.0]))
        return FiniteBlaschke(cfg, rotation)
    if variant == "reproducing_kernel":
        return ReproducingKernelPole(_l2c(data["pole"]))
    if variant == "polynomial":
        return Polynomial([_l2c(pair) for pair in data["coeffs"]])
    if variant == "singular_inner":
        return SingularInner(float(data["mass"]), _l2c(data["boundary"]))
    if variant == "product":
        return Product([model_from_dict(d, input_points) for d in data["factors"]])
    raise RangeError(f"unknown model variant {variant!r}")
