"""Reconstruction of Hardy-class functions from node samples.

Given samples of f at the nodes of a configuration, a weighted sum of the
samples approximates f anywhere inside the disc, and the approximation
error is bounded by the function's Hardy norm times the Blaschke modulus
of the configuration at the evaluation point.

The coefficients are evaluated in a cancellation-free form: the removable
factor (z - z_k) in the textbook expression is cancelled analytically
against the full Blaschke product, so evaluation at a node reproduces the
sample exactly instead of dividing zero by zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .disc import Configuration, blaschke_eval, blaschke_excluded_at_nodes, require_interior
from .errors import DegenerateConfigurationError, RangeError
from .models import check_p

_DENOM_FLOOR = 1e-300


def _power_exponent(p: float) -> float:
    """Exponent (2-p)/p of the mid factor; the p=infinity limit is -1."""
    if math.isinf(p):
        return -1.0
    return (2.0 - p) / p


def coefficient_matrix(cfg: Configuration, zs: np.ndarray, p: float) -> np.ndarray:
    """Recovery coefficients for a batch of evaluation points.

    Returns an array of shape (len(zs), n) whose row at z solves the
    interpolation problem: row . samples approximates f(z), and the row is
    the k-th unit vector whenever z equals node k.
    """
    p = check_p(p)
    if len(cfg) == 0:
        raise RangeError("recovery needs a nonempty configuration")
    zs = np.asarray(zs, dtype=complex)
    if zs.ndim != 1:
        raise ValueError("zs must be one-dimensional")
    if np.any(np.abs(zs) >= 1.0):
        raise RangeError("evaluation points must lie strictly inside the disc")
    nodes = cfg.as_array()
    n = len(nodes)

    denom = blaschke_excluded_at_nodes(cfg)
    if np.min(np.abs(denom)) < _DENOM_FLOOR:
        raise DegenerateConfigurationError(
            "nodes are too close: excluded-product denominator underflows"
        )

    z = zs[:, None]
    a = nodes[None, :]
    factors = (z - a) / (1.0 - np.conjugate(a) * z)      # (P, n)
    full = np.prod(factors, axis=1)                       # (P,)
    with np.errstate(divide="ignore", invalid="ignore"):
        b_excl = full[:, None] / factors                  # (P, n)
    # repair exact node hits: the k-th factor vanished, so divide it out
    # by recomputing the product without it
    hits = np.argwhere(factors == 0.0)
    for i, k in hits:
        row = factors[i].copy()
        row[k] = 1.0
        b_excl[i, k] = np.prod(row)

    exponent = _power_exponent(p)
    base = (1.0 - np.conjugate(z) * a) / (1.0 - np.abs(z) ** 2)
    if exponent == 0.0:
        mid = np.ones_like(base)
    elif exponent == -1.0:
        mid = 1.0 / base
    elif exponent == 1.0:
        mid = base
    else:
        mid = base ** exponent
    weights = (1.0 - np.abs(a) ** 2) * mid / ((1.0 - np.conjugate(a) * z) * denom[None, :])
    return weights * b_excl


def recovery_coefficients(cfg: Configuration, z: complex, p: float) -> list[complex]:
    """Coefficient vector at a single interior point.

    Evaluating at node j returns the j-th standard unit vector, so the
    reconstruction interpolates its samples.
    """
    z = require_interior(z, "evaluation point")
    matrix = coefficient_matrix(cfg, np.array([z], dtype=complex), p)
    return [complex(c) for c in matrix[0]]


def recover(cfg: Configuration, samples: Sequence[complex], z: complex, p: float) -> complex:
    """Weighted sum of the samples approximating f(z)."""
    if len(samples) != len(cfg):
        raise ValueError(f"expected {len(cfg)} samples, got {len(samples)}")
    coeffs = recovery_coefficients(cfg, z, p)
    return sum(c * complex(s) for c, s in zip(coeffs, samples))


def recover_batch(cfg: Configuration, samples: Sequence[complex], zs: np.ndarray,
                  p: float) -> np.ndarray:
    """Vectorised reconstruction over many evaluation points."""
    if len(samples) != len(cfg):
        raise ValueError(f"expected {len(cfg)} samples, got {len(samples)}")
    matrix = coefficient_matrix(cfg, np.asarray(zs, dtype=complex), p)
    return matrix @ np.asarray(samples, dtype=complex)


def recovery_error_bound(cfg: Configuration, z: complex, p: float, norm_p: float) -> float:
    """Certified residual ceiling: norm * |B(z)| / (1-|z|^2)^(1/p).

    Any function of Hardy norm at most ``norm_p`` deviates from its
    reconstruction by at most this amount at z.  The denominator is 1 for
    the sup-norm exponent.
    """
    p = check_p(p)
    if norm_p < 0.0:
        raise RangeError("norm bound must be nonnegative")
    z = require_interior(z, "evaluation point")
    b = abs(blaschke_eval(cfg, z))
    if math.isinf(p):
        return norm_p * b
    return norm_p * b / (1.0 - abs(z) ** 2) ** (1.0 / p)


def recovery_error_bound_batch(cfg: Configuration, zs: np.ndarray, p: float,
                               norm_p: float) -> np.ndarray:
    """Vectorised form of the residual ceiling."""
    p = check_p(p)
    if norm_p < 0.0:
        raise RangeError("norm bound must be nonnegative")
    zs = np.asarray(zs, dtype=complex)
    b = np.ones(zs.shape, dtype=float)
    for w in cfg:
        b *= np.abs((zs - w) / (1.0 - w.conjugate() * zs))
    if math.isinf(p):
        return norm_p * b
    return norm_p * b / (1.0 - np.abs(zs) ** 2) ** (1.0 / p)


@dataclass(frozen=True)
class RecoveryResult:
    """Reconstruction value with its certificate and the coefficient row."""

    value: complex
    error_bound: float
    coefficients: tuple[complex, ...]


def recover_with_bound(cfg: Configuration, samples: Sequence[complex], z: complex,
                       p: float, norm_p: float) -> RecoveryResult:
    """Reconstruction bundled with its certified error bound."""
    coeffs = recovery_coefficients(cfg, z, p)
    if len(samples) != len(coeffs):
        raise ValueError(f"expected {len(coeffs)} samples, got {len(samples)}")
    value = sum(c * complex(s) for c, s in zip(coeffs, samples))
    bound = recovery_error_bound(cfg, z, p, norm_p)
    return RecoveryResult(value, bound, tuple(coeffs))
