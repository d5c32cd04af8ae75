"""Batch front-end.

Reads point sets from CSV, experiment parameters from a JSON config, and
writes deterministic CSV/JSON reports per subcommand.  Outputs are
byte-identical for identical inputs and seeds regardless of the requested
thread count (all pipelines are deterministic single-process reductions).

Exit codes: 0 ok, 2 parse failure, 3 budget refusal, 4 range violation.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .disc import Configuration, QWeight, q_build_boundary_poly
from .diagnostics import e_r_measure, non_blaschke_sum, stolz_membership
from .errors import (
    BudgetExceededError,
    DegenerateConfigurationError,
    DomainError,
    InsufficientMassError,
    ParseError,
    RangeError,
)
from .extremal import PointSet, envelope_build, extremal_exhaustive, extremal_greedy
from .models import model_from_dict, model_hp_norm
from .recovery import recover_batch, recovery_error_bound_batch
from .stability import StabilityReport, stability_report
from .uniqueness import eta_weights, uniqueness_audit

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_BUDGET = 3
EXIT_RANGE = 4

SCHEMA_VERSION = 1

_DEFAULTS = {
    "p": "inf",
    "R": 0.5,
    "eps_list": [0.1, 0.01],
    "budgets": {"n_max": 6, "s_max": 64, "grid": 128},
    "q_anchors": [],
    "seed": 0,
    "method": "auto",
    "subset_budget": 10_000_000,
    "use_envelope": True,
    "r_list": [0.25, 0.5, 0.75, 0.9],
    "stolz": {"vertices": [0.0], "K": 2.0},
    "model": {"variant": "finite_blaschke", "nodes": "input"},
    "probe": {"radii": [0.3, 0.6, 0.9], "angles": 16},
    "z_probe": [0.0, 0.0],
    "allow_boundary": False,
}


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _fmt_or_empty(x) -> str:
    return "" if x is None else _fmt(x)


def _nodes_field(cfg: Configuration) -> str:
    return ";".join(f"{z.real:.17g},{z.imag:.17g}" for z in cfg)


def _json_float(x):
    if x is None:
        return None
    if isinstance(x, float) and (math.isnan(x) or math.isinf(x)):
        return None if math.isnan(x) else ("inf" if x > 0 else "-inf")
    return x


def _p_to_json(p: float):
    return "inf" if math.isinf(p) else p


def read_points(path: str | Path) -> list[complex]:
    """Parse a point file: cartesian ``re,im`` rows or polar ``r,theta`` rows.

    An optional first header line selects the format (``re,im``,
    ``r,theta``, or ``r,theta_deg`` for degrees); without a header the rows
    are read as cartesian.  Exact duplicate rows are dropped with a logged
    count.
    """
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    mode = "cartesian"
    degrees = False
    rows: list[complex] = []
    seen: set[complex] = set()
    duplicates = 0
    lines = text.splitlines()
    start = 0
    for i, line in enumerate(lines):
        stripped = line.strip().lower().replace(" ", "")
        if not stripped or stripped.startswith("#"):
            start = i + 1
            continue
        if stripped in ("re,im", "r,theta", "r,theta_deg"):
            mode = "cartesian" if stripped == "re,im" else "polar"
            degrees = stripped == "r,theta_deg"
            start = i + 1
        break
    for lineno, line in enumerate(lines[start:], start=start + 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split(",")
        if len(parts) != 2:
            raise ParseError(f"expected two comma-separated fields, got {stripped!r}",
                             line=lineno)
        try:
            a, b = float(parts[0]), float(parts[1])
        except ValueError as exc:
            raise ParseError(f"non-numeric field in {stripped!r}", line=lineno) from exc
        if not (math.isfinite(a) and math.isfinite(b)):
            raise ParseError(f"non-finite field in {stripped!r}", line=lineno)
        if mode == "cartesian":
            z = complex(a, b)
        else:
            theta = math.radians(b) if degrees else b
            z = complex(a * math.cos(theta), a * math.sin(theta))
        if z in seen:
            duplicates += 1
            continue
        seen.add(z)
        rows.append(z)
    if duplicates:
        print(f"note: dropped {duplicates} duplicate point row(s)", file=sys.stderr)
    if not rows:
        raise ParseError("input contains no points", line=len(lines) or 1)
    return rows


def _merge(defaults: dict, overrides: dict) -> dict:
    out = dict(defaults)
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = value
    return out


def load_config(path: str | Path | None) -> dict:
    """Experiment configuration: JSON file merged over the defaults."""
    if path is None:
        return dict(_DEFAULTS)
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ParseError("config must be a JSON object")
    return _merge(_DEFAULTS, raw)


def _parse_p(value) -> float:
    if isinstance(value, str):
        if value.lower() in ("inf", "infinity"):
            return math.inf
        try:
            value = float(value)
        except ValueError as exc:
            raise RangeError(f"cannot parse Hardy exponent {value!r}") from exc
    p = float(value)
    if p < 1.0:
        raise RangeError(f"Hardy exponent must be at least 1, got {p}")
    return p


def _check_R(value) -> float:
    R = float(value)
    if not 1e-3 <= R <= 0.999:
        raise RangeError(f"radius {R} outside [1e-3, 0.999]")
    return R


def _budgets(cfg: dict) -> tuple[int, int, int]:
    b = cfg["budgets"]
    n_max, s_max, grid = int(b["n_max"]), int(b["s_max"]), int(b["grid"])
    if n_max < 1 or s_max < 1 or grid < 8:
        raise RangeError(f"budgets out of range: {b}")
    return n_max, s_max, grid


def _q_from_config(cfg: dict) -> QWeight:
    anchors = [complex(math.cos(a), math.sin(a)) for a in cfg["q_anchors"]]
    return q_build_boundary_poly(anchors)


def _csv_writer(handle):
    return csv.writer(handle, lineterminator="\n")


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def cmd_extremal(points: Sequence[complex], cfg: dict, outdir: Path) -> None:
    E = PointSet(points)
    if E.dropped:
        print(f"note: dropped {E.dropped} near-duplicate point(s)", file=sys.stderr)
    q = _q_from_config(cfg)
    n_max, _, _ = _budgets(cfg)
    method = cfg["method"]
    if method not in ("auto", "exhaustive", "greedy"):
        raise RangeError(f"unknown method {method!r}")
    subset_budget = int(cfg["subset_budget"])
    clamped = n_max > len(E)
    n_top = min(n_max, len(E))
    records = []
    for n in range(1, n_top + 1):
        if method == "greedy":
            records.append(extremal_greedy(E, q, n))
        elif method == "exhaustive":
            records.append(extremal_exhaustive(E, q, n, subset_budget=subset_budget))
        else:
            if math.comb(len(E), n) <= subset_budget:
                records.append(extremal_exhaustive(E, q, n, subset_budget=subset_budget))
            else:
                records.append(extremal_greedy(E, q, n))
    with open(outdir / "extremal.csv", "w", newline="") as handle:
        writer = _csv_writer(handle)
        writer.writerow(["n", "method", "V", "V_nth_root", "M", "mu", "nodes"])
        if clamped:
            handle.write(f"# warning: n_max {n_max} clamped to set size {len(E)}\n")
        for rec in records:
            writer.writerow([
                rec.n,
                rec.method,
                _fmt(rec.v),
                _fmt(rec.v ** (1.0 / rec.n)),
                _fmt(rec.m),
                _fmt(rec.mu),
                _nodes_field(rec.config),
            ])


def _witness_dict(witness) -> dict | None:
    if witness is None:
        return None
    return {
        "nodes": [[z.real, z.imag] for z in witness.config],
        "s": witness.s,
        "q_anchors": [[a.real, a.imag] for a in witness.q.anchors],
        "q_normalizer": witness.q.normalizer,
    }


def _report_dict(rep: StabilityReport, grid: int) -> dict:
    return {
        "eps": rep.eps,
        "R": rep.R,
        "p": _p_to_json(rep.p),
        "lower": rep.lower,
        "upper": rep.upper,
        "cap": rep.cap,
        "phi_eps": rep.phi_eps,
        "phi_out_of_range": rep.phi_out_of_range,
        "clamped": rep.clamped,
        "uninformative": rep.uninformative,
        "raw_upper": _json_float(rep.raw_upper),
        "grid_delta": _json_float(rep.grid_delta),
        "grid": grid,
        "lower_witness": _witness_dict(rep.lower_witness),
        "upper_config_nodes": None if rep.upper_config is None
        else [[z.real, z.imag] for z in rep.upper_config],
        "blaschke_witness_value": rep.blaschke_witness_value,
        "alpha": None if rep.alpha is None else {
            "radius": rep.alpha.radius,
            "alpha": rep.alpha.alpha,
            "grid_margin": rep.alpha.grid_margin,
        },
        "rate": None if rep.rate is None else {
            "prefactor": rep.rate.prefactor,
            "sigma": rep.rate.sigma,
            "kappa0": rep.rate.kappa0,
            "upper_exponent": rep.rate.upper_exponent,
        },
        "log_eps_ratio": rep.log_eps_ratio,
    }


def cmd_stability(points: Sequence[complex], cfg: dict, outdir: Path) -> None:
    E = PointSet(points)
    q = _q_from_config(cfg)
    p = _parse_p(cfg["p"])
    R = _check_R(cfg["R"])
    budgets = _budgets(cfg)
    eps_list = sorted({float(e) for e in cfg["eps_list"]}, reverse=True)
    if not eps_list:
        raise RangeError("eps_list must not be empty")

    envelope = None
    if cfg["use_envelope"]:
        n_env = min(budgets[0], len(E))
        try:
            records = [
                extremal_exhaustive(E, q, n, subset_budget=int(cfg["subset_budget"]))
                for n in range(1, n_env + 1)
            ]
            envelope = envelope_build(records)
        except BudgetExceededError:
            envelope = None

    reports = [
        stability_report(E, q, eps, R, p, budgets=budgets, envelope=envelope)
        for eps in eps_list
    ]

    payload = {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "seed": int(cfg["seed"]),
        "q_anchors_angles": list(cfg["q_anchors"]),
        "budgets": {"n_max": budgets[0], "s_max": budgets[1], "grid": budgets[2]},
        "reports": [_report_dict(rep, budgets[2]) for rep in reports],
    }
    _write_json(outdir / "stability.json", payload)

    with open(outdir / "stability_sweep.csv", "w", newline="") as handle:
        writer = _csv_writer(handle)
        writer.writerow(["eps", "lower", "upper", "cap", "phi_eps"])
        for rep in reports:
            writer.writerow([
                _fmt(rep.eps), _fmt(rep.lower), _fmt(rep.upper),
                _fmt(rep.cap), _fmt_or_empty(rep.phi_eps),
            ])


def cmd_recover(points: Sequence[complex], cfg: dict, outdir: Path) -> None:
    E = PointSet(points)
    cfg_nodes = Configuration(E.points)
    p = _parse_p(cfg["p"])
    model = model_from_dict(cfg["model"], input_points=E.points)
    samples = [model.evaluate(z) for z in cfg_nodes]
    norm = model_hp_norm(model, p)
    radii = [float(r) for r in cfg["probe"]["radii"]]
    for r in radii:
        if not 0.0 <= r < 1.0:
            raise RangeError(f"probe radius {r} outside [0, 1)")
    angles = int(cfg["probe"]["angles"])
    if angles < 1:
        raise RangeError("probe angle count must be positive")
    thetas = np.linspace(0.0, 2.0 * math.pi, angles, endpoint=False)
    # node rows first (interpolation check), then the probe circles
    zs = np.concatenate([np.asarray(cfg_nodes.nodes, dtype=complex)]
                        + [r * np.exp(1j * thetas) for r in radii])
    values = recover_batch(cfg_nodes, samples, zs, p)
    bounds = recovery_error_bound_batch(cfg_nodes, zs, p, norm)
    truth = model.evaluate_batch(zs)
    with open(outdir / "recover.csv", "w", newline="") as handle:
        writer = _csv_writer(handle)
        writer.writerow(["z_re", "z_im", "abs_residual", "error_bound"])
        for z, v, t, b in zip(zs, values, truth, bounds):
            writer.writerow([
                _fmt(z.real), _fmt(z.imag), _fmt(abs(t - v)), _fmt(b),
            ])


def cmd_uniqueness(points: Sequence[complex], cfg: dict, outdir: Path) -> None:
    weights = eta_weights(points)
    part = weights.partition
    model_cfg = cfg.get("model")
    if model_cfg is None:
        samples = [0.0j] * len(points)
    else:
        model = model_from_dict(model_cfg, input_points=list(points))
        samples = [model.evaluate(z) for z in points]
    z_probe = complex(cfg["z_probe"][0], cfg["z_probe"][1])
    audit = uniqueness_audit(points, samples, weights, z_probe)

    with open(outdir / "uniqueness_blocks.csv", "w", newline="") as handle:
        writer = _csv_writer(handle)
        writer.writerow(["k", "n_start", "n_end", "size", "block_sum"])
        for k in range(part.block_count):
            writer.writerow([
                k + 1, part.boundaries[k], part.boundaries[k + 1] - 1,
                part.block_size(k), _fmt(part.block_sums[k]),
            ])
    with open(outdir / "uniqueness_eta.csv", "w", newline="") as handle:
        writer = _csv_writer(handle)
        writer.writerow(["j", "re", "im", "eta", "log_eta"])
        for j, (eta, log_eta) in enumerate(zip(weights.eta, weights.log_eta), start=1):
            z = complex(points[j - 1])
            writer.writerow([j, _fmt(z.real), _fmt(z.imag), _fmt(eta), _fmt(log_eta)])

    payload = {
        "schema_version": SCHEMA_VERSION,
        "z_probe": [audit.z_probe.real, audit.z_probe.imag],
        "max_ratio": _json_float(audit.max_ratio),
        "summary": audit.summary,
        "boundaries": list(part.boundaries),
        "leftover_count": part.leftover_count,
        "leftover_sum": part.leftover_sum,
        "blocks": [
            {
                "k": b.index,
                "start": b.start,
                "stop": b.stop,
                "size": b.size,
                "block_sum": b.block_sum,
                "ratio_max": _json_float(b.ratio_max),
                "bound": b.bound,
            }
            for b in audit.blocks
        ],
    }
    _write_json(outdir / "uniqueness_audit.json", payload)


def cmd_diagnose(points: Sequence[complex], cfg: dict, outdir: Path) -> None:
    pts = [complex(z) for z in points]
    if not cfg["allow_boundary"]:
        for z in pts:
            if abs(z) >= 1.0:
                raise RangeError(
                    f"point {z} is not interior; set allow_boundary to admit closure points"
                )
    with open(outdir / "diagnose_bsum.csv", "w", newline="") as handle:
        writer = _csv_writer(handle)
        writer.writerow(["j", "abs_z", "partial_sum"])
        acc = 0.0
        for j, z in enumerate(pts, start=1):
            acc += 1.0 - abs(z)
            writer.writerow([j, _fmt(abs(z)), _fmt(acc)])

    stolz_cfg = cfg["stolz"]
    K = float(stolz_cfg["K"])
    vertices = [float(a) for a in stolz_cfg["vertices"]]
    with open(outdir / "diagnose_stolz.csv", "w", newline="") as handle:
        writer = _csv_writer(handle)
        writer.writerow(["j", "vertex_angle", "K", "member"])
        for angle in vertices:
            vertex = complex(math.cos(angle), math.sin(angle))
            for j, z in enumerate(pts, start=1):
                member = stolz_membership(z, vertex, K)
                writer.writerow([j, _fmt(angle), _fmt(K), int(member)])

    r_list = sorted({float(r) for r in cfg["r_list"]})
    arc_rows = []
    with open(outdir / "diagnose_er.csv", "w", newline="") as handle:
        writer = _csv_writer(handle)
        writer.writerow(["r", "measure", "arc_count"])
        for r in r_list:
            arcset, measure = e_r_measure(pts, r)
            writer.writerow([_fmt(r), _fmt(measure), len(arcset.intervals)])
            for lo, hi in arcset.to_csv_rows():
                arc_rows.append((r, lo, hi))
    with open(outdir / "diagnose_arcs.csv", "w", newline="") as handle:
        writer = _csv_writer(handle)
        writer.writerow(["r", "theta_lo", "theta_hi"])
        for r, lo, hi in arc_rows:
            writer.writerow([_fmt(r), _fmt(lo), _fmt(hi)])


_COMMANDS = {
    "extremal": cmd_extremal,
    "stability": cmd_stability,
    "recover": cmd_recover,
    "uniqueness": cmd_uniqueness,
    "diagnose": cmd_diagnose,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hardystab",
        description="Certified reconstruction and stability bounds for "
                    "analytic functions sampled inside the unit disc.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("extremal", "extremal configurations and their statistics"),
        ("stability", "two-sided stability bounds over a threshold sweep"),
        ("recover", "reconstruction residual versus certified bound"),
        ("uniqueness", "mass blocks, vanishing thresholds, sample audit"),
        ("diagnose", "mass sums, cone membership, arc measures"),
    ]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--input", required=True, help="point file (CSV)")
        p.add_argument("--config", default=None, help="experiment config (JSON)")
        p.add_argument("--out-dir", default=".", help="output directory")
        p.add_argument("--threads", type=int, default=1,
                       help="worker hint; results are thread-count independent")
        p.add_argument("--seed", type=int, default=None,
                       help="seed recorded in reports")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.threads < 1:
            raise RangeError(f"thread count must be positive, got {args.threads}")
        points = read_points(args.input)
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg["seed"] = args.seed
        outdir = Path(args.out_dir)
        outdir.mkdir(parents=True, exist_ok=True)
        _COMMANDS[args.command](points, cfg, outdir)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (RangeError, DomainError, DegenerateConfigurationError,
            InsufficientMassError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RANGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
