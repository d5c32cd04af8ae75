"""Per-sample smallness thresholds that force a bounded function to vanish.

A sequence whose boundary-mass sum diverges is cut greedily into blocks of
growing mass; within each block every point gets a positive threshold
built from the excluded Blaschke product of the block at that point.  A
bounded analytic function whose samples stay comparable to the thresholds
is squeezed toward zero on the half-radius disc, and the audit makes that
squeeze explicit block by block.

Blocks of a long horizon can be large enough that the thresholds underflow
double precision; their logarithms are therefore carried alongside and all
internal comparisons use them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DegenerateConfigurationError,
    InsufficientMassError,
    RangeError,
)

_ETA_CHUNK = 512


@dataclass(frozen=True)
class BlockPartition:
    """Greedy minimal blocks of cumulative boundary mass.

    ``boundaries`` holds the 1-based start indices (n_1, ..., n_{K+1});
    block k covers sequence positions n_k..n_{k+1}-1 and accumulates mass
    at least k.  A trailing incomplete block is reported separately and
    never used for thresholds.
    """

    boundaries: tuple[int, ...]
    block_sums: tuple[float, ...]
    leftover_count: int
    leftover_sum: float

    @property
    def block_count(self) -> int:
        return len(self.block_sums)

    def block_size(self, k: int) -> int:
        """Number of points in block k (0-based block index)."""
        return self.boundaries[k + 1] - self.boundaries[k]

    def block_slice(self, k: int) -> slice:
        """0-based slice of the sequence covered by block k."""
        return slice(self.boundaries[k] - 1, self.boundaries[k + 1] - 1)


def block_partition(moduli: Sequence[float]) -> BlockPartition:
    """Cut a modulus sequence into greedy minimal blocks.

    Block k closes at the smallest index where its mass sum_(1-|z_j|)
    reaches k; each term is below 1, so block k needs at least k points.
    Raises when not even the first block completes, carrying the achieved
    sum as evidence of insufficient mass at this horizon.
    """
    moduli = [float(m) for m in moduli]
    for m in moduli:
        if not 0.0 <= m < 1.0:
            raise RangeError(f"modulus {m} outside [0, 1)")
    boundaries = [1]
    sums = []
    acc = 0.0
    target = 1
    for j, m in enumerate(moduli, start=1):
        acc += 1.0 - m
        if acc >= target:
            boundaries.append(j + 1)
            sums.append(acc)
            acc = 0.0
            target = len(sums) + 1
    if not sums:
        raise InsufficientMassError(
            f"accumulated mass {acc} never reached 1; no complete block",
            achieved=acc,
        )
    leftover = len(moduli) - (boundaries[-1] - 1)
    return BlockPartition(
        boundaries=tuple(boundaries),
        block_sums=tuple(sums),
        leftover_count=leftover,
        leftover_sum=acc,
    )


@dataclass(frozen=True)
class EtaWeights:
    """Positive thresholds aligned with the completed blocks.

    ``eta[j]`` covers sequence position j+1 for positions inside completed
    blocks; ``log_eta`` carries the same information without underflow (the
    thresholds of very large blocks can fall below the smallest positive
    double, in which case ``eta`` reads 0.0 while ``log_eta`` stays finite).
    """

    partition: BlockPartition
    eta: tuple[float, ...]
    log_eta: tuple[float, ...]


def _block_log_excluded(points: np.ndarray) -> np.ndarray:
    """log prod_{l != j} d(z_j, z_l) for every j of one block, chunked."""
    m = len(points)
    out = np.zeros(m, dtype=float)
    with np.errstate(divide="ignore"):
        for start in range(0, m, _ETA_CHUNK):
            chunk = points[start : start + _ETA_CHUNK, None]
            num = np.abs(chunk - points[None, :])
            den = np.abs(1.0 - np.conjugate(points[None, :]) * chunk)
            logs = np.log(num) - np.log(den)
            rows = np.arange(start, min(start + _ETA_CHUNK, m))
            logs[rows - start, rows] = 0.0
            out[start : start + _ETA_CHUNK] = logs.sum(axis=1)
    return out


def block_eta(block: Sequence[complex]) -> tuple[float, ...]:
    """Thresholds of a standalone block: |B_j(block, z_j)| / block-size.

    Points must be pairwise distinct interior points.
    """
    pts = np.asarray([complex(z) for z in block], dtype=complex)
    if pts.size == 0:
        raise RangeError("block must contain at least one point")
    if np.any(np.abs(pts) >= 1.0):
        raise RangeError("block points must lie strictly inside the disc")
    logs = _block_log_excluded(pts)
    if not np.all(np.isfinite(logs)):
        raise DegenerateConfigurationError("block contains coincident points")
    return tuple(float(np.exp(v - math.log(len(pts)))) for v in logs)


def eta_weights(points: Sequence[complex]) -> EtaWeights:
    """Thresholds |B_j(block, z_j)| / block-size over the completed blocks.

    Points within each block must be pairwise distinct; coincident points
    make the excluded product vanish and are rejected.
    """
    pts = np.asarray([complex(z) for z in points], dtype=complex)
    if np.any(np.abs(pts) >= 1.0):
        raise RangeError("sequence points must lie strictly inside the disc")
    part = block_partition(np.abs(pts))
    eta: list[float] = []
    log_eta: list[float] = []
    for k in range(part.block_count):
        block = pts[part.block_slice(k)]
        m = len(block)
        logs = _block_log_excluded(block)
        if not np.all(np.isfinite(logs)):
            raise DegenerateConfigurationError(
                f"block {k + 1} contains coincident points"
            )
        log_vals = logs - math.log(m)
        log_eta.extend(float(v) for v in log_vals)
        eta.extend(float(np.exp(v)) for v in log_vals)
    return EtaWeights(partition=part, eta=tuple(eta), log_eta=tuple(log_eta))


@dataclass(frozen=True)
class BlockAudit:
    """Per-block confrontation of samples with thresholds.

    ``ratio_max`` is the largest |sample|/threshold in the block;
    ``bound`` is (1 + sum_j |f_j|/(m eta_j)) * 2 exp(-(1-|z|^2)/4 * mass),
    the explicit squeeze on |f| at the probe point for functions bounded
    by 1.
    """

    index: int
    start: int
    stop: int
    size: int
    block_sum: float
    ratio_max: float
    bound: float


@dataclass(frozen=True)
class UniquenessAudit:
    z_probe: complex
    blocks: tuple[BlockAudit, ...]
    max_ratio: float
    summary: str


def uniqueness_audit(points: Sequence[complex], samples: Sequence[complex],
                     weights: EtaWeights, z_probe: complex = 0.0) -> UniquenessAudit:
    """Confront sampled values with the thresholds, block by block.

    Reports the worst sample-to-threshold ratio of each block and the
    induced ceiling on |f| at the probe point (valid for |f| bounded by 1
    on the disc).  Bounded ratios force the ceilings to decay like
    exp(-mass/4); samples matching the thresholds make the ceilings
    useless, which is exactly the dichotomy the thresholds encode.
    """
    z_probe = complex(z_probe)
    if abs(z_probe) > 0.5:
        raise RangeError(f"probe point must satisfy |z| <= 1/2, got {z_probe}")
    pts = [complex(z) for z in points]
    if len(samples) != len(pts):
        raise ValueError(f"expected {len(pts)} samples, got {len(samples)}")
    part = weights.partition
    probe_factor = (1.0 - abs(z_probe) ** 2) / 4.0
    blocks = []
    overall = 0.0
    for k in range(part.block_count):
        sl = part.block_slice(k)
        m = part.block_size(k)
        log_eta = weights.log_eta[sl]
        block_samples = samples[sl.start : sl.stop]
        ratio = 0.0
        tail = 0.0
        for le, f in zip(log_eta, block_samples):
            mag = abs(complex(f))
            if mag == 0.0:
                continue
            ratio = max(ratio, math.exp(math.log(mag) - le))
            tail += math.exp(math.log(mag) - le - math.log(m))
        bound = (1.0 + tail) * 2.0 * math.exp(-probe_factor * part.block_sums[k])
        overall = max(overall, ratio)
        blocks.append(BlockAudit(
            index=k + 1,
            start=part.boundaries[k],
            stop=part.boundaries[k + 1] - 1,
            size=m,
            block_sum=part.block_sums[k],
            ratio_max=ratio,
            bound=bound,
        ))
    if overall == 0.0:
        summary = ("all samples vanish: consistent with the zero function on "
                   "|z| <= 1/2 up to the per-block bounds")
    elif all(b.bound < 1.0 for b in blocks[-2:]):
        summary = ("sample-to-threshold ratios stay bounded: the per-block "
                   "bounds force decay at the probe point")
    else:
        summary = ("ratios grow against the thresholds: no decay is forced "
                   "at this horizon")
    return UniquenessAudit(
        z_probe=z_probe,
        blocks=tuple(blocks),
        max_ratio=overall,
        summary=summary,
    )
