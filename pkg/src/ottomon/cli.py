"""Command-line front end: plot-data emission, metrics and self-checks.

Every configuration key can come from an INI file (``--config``) or from a
flag of the same name; flags win.  Commands write CSV by default and JSON
with ``--format json``.  CSV numbers carry 12 significant digits; JSON mirrors
full binary precision by emitting shortest round-trip decimal strings.

Exit codes: 0 success, 1 self-check failure, 2 bad configuration or a request
the configured engine cannot satisfy.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass

import numpy as np

from .asymptotics import (
    asymptotic_heat_per_cycle,
    asymptotic_work_per_cycle,
    build_cycle_superoperator,
    derive_timed_config,
    initial_state,
    spectrum,
    thermal_duration_from_theta,
)
from .config import KEY_SPECS, ConfigError, load_engine_config
from .engine import EngineConfig, LandauZenerStroke, LindbladThermo, build_model
from .lattice import joint_via_lattice, marginal_via_lattice, work_per_cycle_series
from .moments import (
    MomentSet,
    analytic_moments_lindblad,
    analytic_moments_perfect,
    efficiency,
    power_output,
    reliability,
)
from .oracle import ORACLE_CYCLE_LIMIT, joint_pdf_rc, joint_pdf_rm
from .qubit import landau_zener_params
from .validation import run_validation

DENSITY_MATCH_TOL = 1e-12
DEFAULT_GRID_POINTS = 4096
GRID_PAD_SIGMAS = 8.0


def _fmt(value) -> str:
    """CSV cell: 12 significant digits for floats, empty for missing."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    return f"{float(value):.12g}"


def _jsonify(value):
    """JSON payload with floats rendered as round-trip decimal strings."""
    if isinstance(value, dict):
        return {key: _jsonify(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonify(item) for item in value]
    if isinstance(value, np.ndarray):
        return [_jsonify(item) for item in value.tolist()]
    if isinstance(value, bool):
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return value


def _csv_text(header: list[str], rows: list[list]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(cell) for cell in row])
    return out.getvalue()


def _emit(args, text: str) -> None:
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(args, payload) -> None:
    _emit(args, json.dumps(_jsonify(payload), indent=2) + "\n")


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("configuration")
    group.add_argument("--config", metavar="PATH", help="INI configuration file")
    for key, spec in KEY_SPECS.items():
        group.add_argument(
            f"--{key}", type=spec.parse, default=None, metavar="V", help=spec.help
        )


def _add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--format", choices=("csv", "json"), default="csv", help="output format"
    )
    parser.add_argument(
        "--output", "-o", metavar="PATH", help="write output to a file"
    )


def _load_config(args) -> EngineConfig:
    overrides = {key: getattr(args, key) for key in KEY_SPECS}
    config, values = load_engine_config(args.config, overrides)
    args.resolved_values = values
    return config


def _marginal_components(mix) -> list[dict]:
    order = np.argsort(mix.centers)
    return [
        {"center": float(c), "weight": float(w)}
        for c, w in zip(mix.centers[order], mix.weights[order])
    ]


def cmd_pdf(args) -> int:
    config = _load_config(args)
    mixes = {
        scheme: marginal_via_lattice(config, scheme, args.observable, config.cycles)
        for scheme in ("RM", "RC1", "RC2")
    }
    if args.format == "json":
        payload = {
            "observable": args.observable,
            "cycles": config.cycles,
            "schemes": {
                name.lower(): {
                    "variance": mix.variance,
                    "components": _marginal_components(mix),
                }
                for name, mix in mixes.items()
            },
        }
        _emit_json(args, payload)
        return 0
    if args.points < 2:
        raise ConfigError("density grid needs at least 2 points")
    pad = GRID_PAD_SIGMAS * max(np.sqrt(m.variance) for m in mixes.values())
    lo = args.grid_min
    hi = args.grid_max
    if lo is None:
        lo = min(m.centers.min() for m in mixes.values()) - pad
    if hi is None:
        hi = max(m.centers.max() for m in mixes.values()) + pad
    if not hi > lo:
        raise ConfigError("grid upper bound must exceed the lower bound")
    grid = np.linspace(lo, hi, args.points)
    dens = {name: mix.density(grid) for name, mix in mixes.items()}
    scale = max(1.0, float(dens["RC2"].max()))
    split = float(np.abs(dens["RC1"] - dens["RC2"]).max()) > DENSITY_MATCH_TOL * scale
    header = ["value", "density_rm", "density_rc"]
    if split:
        header.append("density_rc1")
    rows = []
    for i, x in enumerate(grid):
        row = [x, dens["RM"][i], dens["RC2"][i]]
        if split:
            row.append(dens["RC1"][i])
        rows.append(row)
    _emit(args, _csv_text(header, rows))
    return 0


def cmd_joint(args) -> int:
    config = _load_config(args)
    if config.cycles > 2:
        raise ConfigError(
            "the joint command enumerates branch pairs exhaustively; "
            f"use at most 2 cycles (got {config.cycles})"
        )
    if config.scheme == "RC1":
        raise ConfigError("joint distribution requires two pointers (RM or RC2)")
    build = joint_pdf_rm if config.scheme == "RM" else joint_pdf_rc
    mix = build(config, config.cycles)
    order = np.lexsort((mix.centers[:, 1], mix.centers[:, 0]))
    if args.format == "json":
        payload = {
            "scheme": config.scheme,
            "cycles": config.cycles,
            "covariance": mix.covariance,
            "components": [
                {
                    "work": float(mix.centers[i, 0]),
                    "heat": float(mix.centers[i, 1]),
                    "weight": float(mix.weights[i]),
                }
                for i in order
            ],
        }
        _emit_json(args, payload)
        return 0
    rows = [
        [mix.centers[i, 0], mix.centers[i, 1], mix.weights[i]] for i in order
    ]
    _emit(args, _csv_text(["work", "heat", "weight"], rows))
    return 0


def _durations(config: EngineConfig) -> tuple[float | None, float | None]:
    t1 = config.stroke.t1 if isinstance(config.stroke, LandauZenerStroke) else None
    t2 = (
        thermal_duration_from_theta(
            config.thermo.theta, config.eps_c, config.eps_h
        )
        if isinstance(config.thermo, LindbladThermo)
        else None
    )
    return t1, t2


def _numeric_moments(config: EngineConfig, scheme: str) -> tuple[MomentSet, bool]:
    """Mixture moments after the configured cycles; flags joint availability."""
    if scheme == "RC1":
        mw, m2w = marginal_via_lattice(config, scheme, "work", config.cycles).moments()
        mq, m2q = marginal_via_lattice(config, scheme, "heat", config.cycles).moments()
        return MomentSet(mw, mq, m2w, m2q, 0.0), False
    mix = joint_via_lattice(config, scheme, config.cycles)
    return MomentSet(*mix.moments()), True


def _analytic_moments(config: EngineConfig) -> dict[str, MomentSet] | None:
    """Single-cycle closed forms when the configuration admits them."""
    if config.cycles != 1:
        return None
    model = build_model(config)
    if isinstance(config.thermo, LindbladThermo):
        rho0 = initial_state(config, model)
        return analytic_moments_lindblad(model, np.diag(np.diag(rho0)))
    from .engine import perfect_targets

    target_cold, target_hot = perfect_targets(
        config.thermo, model.h_cold, model.h_hot
    )
    if abs(target_cold.q) > 0 or abs(target_hot.q) > 0:
        return None
    base = analytic_moments_perfect(model)
    sig2 = config.sigma**2
    return {
        "RM": MomentSet(
            base.mean_work,
            base.mean_heat,
            base.second_work + 4.0 * sig2,
            base.second_heat + 2.0 * sig2,
            base.cross - 2.0 * sig2,
        ),
        "RC": MomentSet(
            base.mean_work,
            base.mean_heat,
            base.second_work + sig2,
            base.second_heat + sig2,
            base.cross,
        ),
    }


def cmd_moments(args) -> int:
    config = _load_config(args)
    analytic = _analytic_moments(config)
    t1, t2 = _durations(config)
    rows = []
    for scheme in ("RM", "RC1", "RC2"):
        numeric, has_joint = _numeric_moments(config, scheme)
        eta = efficiency(numeric)
        rel = reliability(numeric)
        power = (
            power_output(numeric.mean_work / config.cycles, t1, t2)
            if t1 is not None and t2 is not None
            else None
        )
        row: dict = {
            "scheme": scheme,
            "cycles": config.cycles,
            "mean_work": numeric.mean_work,
            "mean_heat": numeric.mean_heat,
            "var_work": numeric.work_variance,
            "var_heat": numeric.heat_variance,
            "cov_work_heat": (
                numeric.cross - numeric.mean_work * numeric.mean_heat
                if has_joint
                else None
            ),
            "efficiency": eta,
            "reliability": rel,
            "power": power,
        }
        ana = analytic.get("RM" if scheme == "RM" else "RC") if analytic else None
        if ana is not None:
            # The closed heat forms describe per-stroke readout and the
            # two-pointer accumulation; a lone heat pointer keeps extra
            # interference, so its heat columns stay empty.
            heat_form = scheme != "RC1"
            row.update(
                {
                    "analytic_mean_work": ana.mean_work,
                    "analytic_mean_heat": ana.mean_heat if heat_form else None,
                    "analytic_var_work": ana.work_variance,
                    "analytic_var_heat": ana.heat_variance if heat_form else None,
                    "analytic_cov_work_heat": (
                        ana.cross - ana.mean_work * ana.mean_heat
                        if has_joint
                        else None
                    ),
                    "analytic_efficiency": efficiency(ana) if heat_form else None,
                    "analytic_reliability": reliability(ana),
                }
            )
        else:
            row.update(
                {key: None for key in (
                    "analytic_mean_work",
                    "analytic_mean_heat",
                    "analytic_var_work",
                    "analytic_var_heat",
                    "analytic_cov_work_heat",
                    "analytic_efficiency",
                    "analytic_reliability",
                )}
            )
        rows.append(row)
    header = list(rows[0].keys())
    if args.format == "json":
        _emit_json(args, {"moments": rows})
        return 0
    _emit(args, _csv_text(header, [[row[key] for key in header] for row in rows]))
    return 0


@dataclass(frozen=True)
class SweepSpec:
    """Grid over stroke and thermalization durations."""

    t1_min: float
    t1_max: float
    t1_steps: int
    t2_min: float
    t2_max: float
    t2_steps: int
    quantity: str = "power"
    at: str = "asymptotic"

    def __post_init__(self) -> None:
        if self.t1_steps < 1 or self.t2_steps < 1:
            raise ConfigError("sweep step counts must be at least 1")
        if not (0 < self.t1_min <= self.t1_max):
            raise ConfigError("need 0 < t1_min <= t1_max")
        if not (0 < self.t2_min <= self.t2_max):
            raise ConfigError("need 0 < t2_min <= t2_max")
        if self.quantity not in ("power", "efficiency", "lambda2"):
            raise ConfigError("quantity must be power, efficiency or lambda2")
        if self.at != "asymptotic":
            try:
                cycles = int(self.at)
            except ValueError as exc:
                raise ConfigError("at must be 'asymptotic' or a cycle count") from exc
            if cycles < 1:
                raise ConfigError("cycle count must be at least 1")

    @property
    def cycles(self) -> int | None:
        return None if self.at == "asymptotic" else int(self.at)

    def t1_values(self) -> np.ndarray:
        return np.linspace(self.t1_min, self.t1_max, self.t1_steps)

    def t2_values(self) -> np.ndarray:
        return np.linspace(self.t2_min, self.t2_max, self.t2_steps)


def _sweep_value(
    config: EngineConfig, kind: str, quantity: str, t1: float, t2: float,
    cycles: int | None,
) -> float | None:
    if quantity == "lambda2":
        return spectrum(build_cycle_superoperator(config, kind)).lambda2
    if cycles is None:
        work = asymptotic_work_per_cycle(config, kind)
        heat = asymptotic_heat_per_cycle(config, kind)
    else:
        scheme = "RM" if kind == "RM" else "RC2"
        work = work_per_cycle_series(config, scheme, cycles)[-1][1]
        heat = (
            marginal_via_lattice(config, scheme, "heat", cycles).moments()[0] / cycles
        )
    if quantity == "power":
        return power_output(work, t1, t2)
    return None if heat == 0.0 else -work / heat


def run_sweep(config: EngineConfig, sweep: SweepSpec) -> list[dict]:
    """Evaluate the sweep grid in deterministic row order (t1 outer)."""
    if not isinstance(config.stroke, LandauZenerStroke):
        raise ConfigError(
            "sweeps drive the stroke from its duration; "
            "set stroke = landau_zener"
        )
    if not isinstance(config.thermo, LindbladThermo):
        raise ConfigError(
            "sweeps derive the thermalization angle from its duration; "
            "set thermo = lindblad"
        )
    rows = []
    for t1 in sweep.t1_values():
        for t2 in sweep.t2_values():
            point = derive_timed_config(config, float(t1), float(t2))
            row = {"kind": "grid", "t1": float(t1), "t2": float(t2)}
            for kind in ("RM", "RC"):
                row[f"value_{kind.lower()}"] = _sweep_value(
                    point, kind, sweep.quantity, float(t1), float(t2), sweep.cycles
                )
            rows.append(row)
    for kind in ("rm", "rc"):
        best = max(
            (row for row in rows if row[f"value_{kind}"] is not None),
            key=lambda row: row[f"value_{kind}"],
            default=None,
        )
        if best is not None:
            rows.append({**best, "kind": f"argmax_{kind}"})
    return rows


def cmd_sweep(args) -> int:
    config = _load_config(args)
    sweep = SweepSpec(
        t1_min=args.t1_min,
        t1_max=args.t1_max,
        t1_steps=args.t1_steps,
        t2_min=args.t2_min,
        t2_max=args.t2_max,
        t2_steps=args.t2_steps,
        quantity=args.quantity,
        at=args.at,
    )
    rows = run_sweep(config, sweep)
    header = ["kind", "t1", "t2", "value_rm", "value_rc"]
    if args.format == "json":
        _emit_json(args, {"quantity": sweep.quantity, "rows": rows})
        return 0
    _emit(args, _csv_text(header, [[row[key] for key in header] for row in rows]))
    return 0


def cmd_asymptotic(args) -> int:
    config = _load_config(args)
    t1, t2 = _durations(config)
    rows = []
    for kind in ("RM", "RC"):
        work = asymptotic_work_per_cycle(config, kind)
        heat = asymptotic_heat_per_cycle(config, kind)
        lam2 = spectrum(build_cycle_superoperator(config, kind)).lambda2
        power = (
            power_output(work, t1, t2)
            if t1 is not None and t2 is not None
            else None
        )
        rows.append(
            {
                "kind": kind,
                "work_per_cycle": work,
                "heat_per_cycle": heat,
                "efficiency": None if heat == 0.0 else -work / heat,
                "lambda2": lam2,
                "power": power,
                "dud": work > 0.0,
            }
        )
    header = list(rows[0].keys())
    if args.format == "json":
        _emit_json(args, {"asymptotic": rows})
        return 0
    _emit(args, _csv_text(header, [[row[key] for key in header] for row in rows]))
    return 0


def cmd_lz(args) -> int:
    config = _load_config(args)
    t1 = (
        config.stroke.t1
        if isinstance(config.stroke, LandauZenerStroke)
        else args.resolved_values["t1"]
    )
    if t1 is None or t1 <= 0:
        raise ConfigError("a positive stroke duration is required (--t1)")
    params = landau_zener_params(config.eps_c, config.eps_h, float(t1))
    row = {"t1": float(t1), "alpha": params.alpha, "phi": params.phi}
    if args.format == "json":
        _emit_json(args, row)
        return 0
    _emit(args, _csv_text(["t1", "alpha", "phi"], [[row["t1"], row["alpha"], row["phi"]]]))
    return 0


def cmd_validate(args) -> int:
    config = _load_config(args)
    report = run_validation(config, suppression_scale=args.corrupt_suppression)
    if args.format == "json":
        _emit_json(args, report.as_dict())
    else:
        _emit(args, "\n".join(report.lines()) + "\n")
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ottomon",
        description=(
            "Two-level monitored heat-engine simulator: work and heat "
            "statistics under per-stroke or accumulated readout."
        ),
    )
    common = argparse.ArgumentParser(add_help=False)
    _add_config_flags(common)
    _add_output_flags(common)
    sub = parser.add_subparsers(dest="command", required=True)

    p_pdf = sub.add_parser(
        "pdf", parents=[common], help="marginal densities on a value grid"
    )
    p_pdf.add_argument(
        "--observable", choices=("work", "heat"), default="work",
        help="which record to tabulate",
    )
    p_pdf.add_argument("--grid-min", type=float, default=None, help="grid lower bound")
    p_pdf.add_argument("--grid-max", type=float, default=None, help="grid upper bound")
    p_pdf.add_argument(
        "--points", type=int, default=DEFAULT_GRID_POINTS, help="grid point count"
    )
    p_pdf.set_defaults(func=cmd_pdf)

    p_joint = sub.add_parser(
        "joint",
        parents=[common],
        help=f"exhaustive joint (work, heat) mixture, up to {ORACLE_CYCLE_LIMIT - 1} cycles",
    )
    p_joint.set_defaults(func=cmd_joint)

    p_moments = sub.add_parser(
        "moments", parents=[common], help="moments, efficiency, reliability, power"
    )
    p_moments.set_defaults(func=cmd_moments)

    p_sweep = sub.add_parser(
        "sweep", parents=[common], help="grid sweep over stroke/thermal durations"
    )
    p_sweep.add_argument("--t1-min", type=float, default=1.0)
    p_sweep.add_argument("--t1-max", type=float, default=10.0)
    p_sweep.add_argument("--t1-steps", type=int, default=10)
    p_sweep.add_argument("--t2-min", type=float, default=2.0)
    p_sweep.add_argument("--t2-max", type=float, default=20.0)
    p_sweep.add_argument("--t2-steps", type=int, default=10)
    p_sweep.add_argument(
        "--quantity", choices=("power", "efficiency", "lambda2"), default="power"
    )
    p_sweep.add_argument(
        "--at", default="asymptotic",
        help="'asymptotic' or a finite cycle count",
    )
    p_sweep.set_defaults(func=cmd_sweep)

    p_asym = sub.add_parser(
        "asymptotic", parents=[common], help="per-cycle values in the invariant state"
    )
    p_asym.set_defaults(func=cmd_asymptotic)

    p_lz = sub.add_parser(
        "lz", parents=[common],
        help="stroke transition probability and phase for a duration",
    )
    p_lz.set_defaults(func=cmd_lz)

    p_val = sub.add_parser(
        "validate", parents=[common], help="cross-route self-check report"
    )
    p_val.add_argument(
        "--corrupt-suppression", type=float, default=1.0,
        help="test hook: exponent applied to readout suppression factors "
        "in the reference route (1.0 = honest)",
    )
    p_val.set_defaults(func=cmd_validate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())
