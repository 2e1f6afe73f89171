"""Command-line interface: simulate, criterion, solve-masses, fixed-point, isosceles.

Configuration comes from a flat key=value text file (``--config FILE``,
``#`` comments allowed) with per-key command-line flags taking
precedence.  Angles are radians; lists are comma-separated.  Reports
are deterministic key=value text with a single leading ``#`` comment;
trajectories are CSV with floats printed to 17 significant digits so a
re-parse reproduces them bit-exactly.

Exit codes: 0 success, 1 input error, 2 singularity halt,
3 infeasible or criterion failed.  The environment variable
``CURVED_NBODY_TOL_SCALE`` (default 1) multiplies the tolerances used
by the commands.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .dynamics import Trajectory, integrate
from .equilibria import (
    EquatorTriangle,
    isosceles_classify,
    make_relative_equilibrium,
    solve_fixed_point_masses,
)
from .errors import (
    CLIInputError,
    CriterionViolation,
    CurvedNBodyError,
    InfeasibleTriangle,
    InvalidCurvature,
    InvalidPolygon,
    ResidualTooLarge,
    SingularityError,
    SingularMatrix,
)
from .geometry import Curvature
from .homographic import PolygonConfig, check_criterion, ring_state, solve_masses

DEFAULT_CRITERION_TOL = 1e-9
R_GRID_POINTS = 9
R_GRID_SPAN = (0.1, 0.9)


def tol_scale() -> float:
    """Multiplier for all CLI tolerances, from CURVED_NBODY_TOL_SCALE."""
    raw = os.environ.get("CURVED_NBODY_TOL_SCALE", "1")
    try:
        s = float(raw)
    except ValueError as e:
        raise CLIInputError(f"CURVED_NBODY_TOL_SCALE: invalid float {raw!r}") from e
    if not (s > 0 and math.isfinite(s)):
        raise CLIInputError(f"CURVED_NBODY_TOL_SCALE must be positive, got {raw!r}")
    return s


def fmt(x: float) -> str:
    """Format a float with 17 significant digits (round-trip exact)."""
    return format(float(x), ".17g")


def fmt_list(xs) -> str:
    return ",".join(fmt(x) for x in xs)


# --------------------------------------------------------------------------
# Configuration resolution: key=value file, overridden by flags.

@dataclass(frozen=True)
class Key:
    name: str
    kind: str  # float | floats | int | str | bool
    default: object = None
    required: bool = False


_SCHEMAS: dict[str, list[Key]] = {
    "simulate": [
        Key("kappa", "float", required=True),
        Key("masses", "floats", required=True),
        Key("alphas", "floats", required=True),
        Key("r", "float", required=True),
        Key("omega", "float", 0.0),
        Key("r_dot", "float", 0.0),
        Key("omega_dot", "float", 0.0),
        Key("hemisphere", "int", 1),
        Key("dt", "float", required=True),
        Key("t_end", "float", required=True),
        Key("stride", "int", 1),
        Key("out", "str", "trajectory.csv"),
        Key("plot", "bool", False),
    ],
    "criterion": [
        Key("kappa", "float", required=True),
        Key("masses", "floats", required=True),
        Key("alphas", "floats", required=True),
        Key("r_grid", "floats", None),
        Key("omega", "float", 0.0),
        Key("hemisphere", "int", 1),
        Key("tol", "float", DEFAULT_CRITERION_TOL),
        Key("out", "str", "criterion_report.txt"),
        Key("plot", "bool", False),
    ],
    "solve-masses": [
        Key("kappa", "float", required=True),
        Key("alphas", "floats", required=True),
        Key("r", "float", required=True),
        Key("omega", "float", 0.0),
        Key("hemisphere", "int", 1),
        Key("delta_target", "float", 1.0),
        Key("out", "str", None),
    ],
    "fixed-point": [
        Key("kappa", "float", required=True),
        Key("thetas", "floats", required=True),
        Key("speed", "float", 1.0),
        Key("emit_config", "str", None),
        Key("out", "str", None),
        Key("plot", "bool", False),
    ],
    "isosceles": [
        Key("M", "float", required=True),
        Key("m", "float", required=True),
        Key("kappa", "float", required=True),
        Key("out", "str", None),
    ],
}


def _coerce(key: Key, raw: str, where: str):
    try:
        if key.kind == "float":
            return float(raw)
        if key.kind == "int":
            return int(raw)
        if key.kind == "floats":
            parts = [p.strip() for p in raw.split(",")]
            vals = [float(p) for p in parts if p]
            if not vals:
                raise ValueError("empty list")
            return vals
        if key.kind == "bool":
            low = raw.strip().lower()
            if low in ("true", "1", "yes", "on"):
                return True
            if low in ("false", "0", "no", "off"):
                return False
            raise ValueError(f"not a boolean: {raw!r}")
        return raw
    except ValueError as e:
        raise CLIInputError(f"{where}: key '{key.name}': {e}") from e


def parse_config_file(path: str) -> dict[str, tuple[str, int]]:
    """Parse a key=value file into {key: (raw value, line number)}."""
    data: dict[str, tuple[str, int]] = {}
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise CLIInputError(f"{path}: cannot read config file: {e}") from e
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        if not sep or not key:
            raise CLIInputError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        data[key] = (val, lineno)
    return data


def resolve(command: str, args: argparse.Namespace) -> dict:
    """Merge config-file values and flag overrides against the schema."""
    schema = _SCHEMAS[command]
    names = {k.name for k in schema}
    file_values: dict[str, tuple[str, int]] = {}
    path = getattr(args, "config", None)
    if path:
        file_values = parse_config_file(path)
        unknown = set(file_values) - names
        if unknown:
            key = sorted(unknown)[0]
            raise CLIInputError(
                f"{path}:{file_values[key][1]}: unknown key '{key}' for {command}"
            )
    out: dict = {}
    for key in schema:
        flag = getattr(args, key.name, None)
        if flag is not None:
            out[key.name] = _coerce(key, flag, f"option --{key.name.replace('_', '-')}")
        elif key.name in file_values:
            raw, lineno = file_values[key.name]
            out[key.name] = _coerce(key, raw, f"{path}:{lineno}")
        elif key.required:
            raise CLIInputError(f"{command}: missing required key '{key.name}'")
        else:
            out[key.name] = key.default
    return out


# --------------------------------------------------------------------------
# Trajectory CSV.

def trajectory_header(n: int) -> list[str]:
    cols = ["t", "H", "cx", "cy", "cz"]
    for i in range(1, n + 1):
        cols += [f"x{i}", f"y{i}", f"z{i}", f"vx{i}", f"vy{i}", f"vz{i}"]
    return cols


def write_trajectory_csv(traj: Optional[Trajectory], n: int, path: str) -> None:
    """Write observed states; floats at 17 significant digits."""
    lines = [",".join(trajectory_header(n))]
    if traj is not None:
        for state, cq in zip(traj.states, traj.conserved):
            row = [state.time, cq.energy, *cq.angular_momentum]
            for b in state.bodies:
                row.extend(b.position.coords)
                row.extend(b.velocity)
            lines.append(",".join(fmt(x) for x in row))
    Path(path).write_text("\n".join(lines) + "\n")


def read_trajectory_csv(path: str) -> tuple[list[str], np.ndarray]:
    """Parse a trajectory CSV back into (column names, row-major floats)."""
    lines = Path(path).read_text().splitlines()
    header = lines[0].split(",")
    rows = [[float(x) for x in line.split(",")] for line in lines[1:] if line]
    data = np.array(rows) if rows else np.empty((0, len(header)))
    return header, data


def _write_report(path: Optional[str], command: str, lines: list[str]) -> None:
    if path is None:
        return
    Path(path).write_text(f"# curved-nbody {command}\n" + "\n".join(lines) + "\n")


# --------------------------------------------------------------------------
# Commands.

def cmd_simulate(cfg: dict) -> int:
    curv = Curvature(cfg["kappa"])
    if len(cfg["masses"]) != len(cfg["alphas"]):
        raise CLIInputError(
            f"simulate: got {len(cfg['masses'])} masses but {len(cfg['alphas'])} alphas"
        )
    if cfg["dt"] <= 0 or cfg["t_end"] < 0:
        raise CLIInputError("simulate: need dt > 0 and t_end >= 0")
    n = len(cfg["masses"])
    try:
        state = ring_state(
            curv,
            cfg["masses"],
            cfg["r"],
            cfg["omega"],
            cfg["alphas"],
            cfg["r_dot"],
            cfg["omega_dot"],
            cfg["hemisphere"],
        )
    except SingularityError as e:
        write_trajectory_csv(None, n, cfg["out"])
        print(f"drift_H=nan drift_c=nan halted={e.reason}")
        return 2
    traj = integrate(state, cfg["dt"], cfg["t_end"], cfg["stride"])
    write_trajectory_csv(traj, n, cfg["out"])
    h = traj.energies
    c = traj.momenta
    denom = abs(h[0]) if h[0] != 0 else 1.0
    drift_h = float(np.max(np.abs(h - h[0]))) / denom
    drift_c = float(np.max(np.abs(c - c[0])))
    print(f"drift_H={drift_h:.6e} drift_c={drift_c:.6e} halted={traj.halted or 'none'}")
    if cfg["plot"]:
        from .plotting import plot_trajectory

        plot_trajectory(traj, str(Path(cfg["out"]).with_suffix(".png")))
    return 0 if traj.halted is None else 2


def _default_r_grid(kappa: float) -> list[float]:
    r_max = 1.0 / math.sqrt(abs(kappa))
    lo, hi = R_GRID_SPAN
    return list(np.linspace(lo * r_max, hi * r_max, R_GRID_POINTS))


def cmd_criterion(cfg: dict) -> int:
    curv = Curvature(cfg["kappa"])
    tol = cfg["tol"] * tol_scale()
    grid = cfg["r_grid"] if cfg["r_grid"] is not None else _default_r_grid(cfg["kappa"])
    lines = [
        f"kappa={fmt(cfg['kappa'])}",
        f"n={len(cfg['alphas'])}",
        f"masses={fmt_list(cfg['masses'])}",
        f"tol={fmt(tol)}",
        f"r_grid={fmt_list(grid)}",
    ]
    delta_spreads = []
    gamma_spreads = []
    all_pass = True
    for r in grid:
        p = PolygonConfig(curv, r, cfg["omega"], cfg["alphas"], cfg["hemisphere"])
        rep = check_criterion(cfg["masses"], p, tol)
        all_pass = all_pass and rep.verdict
        delta_spreads.append(rep.delta_spread)
        gamma_spreads.append(rep.gamma_spread)
        lines += [
            f"r={fmt(r)}",
            f"deltas={fmt_list(rep.deltas)}",
            f"gammas={fmt_list(rep.gammas)}",
            f"delta_spread={fmt(rep.delta_spread)}",
            f"gamma_spread={fmt(rep.gamma_spread)}",
            f"verdict={'true' if rep.verdict else 'false'}",
        ]
    lines.append(f"overall={'true' if all_pass else 'false'}")
    _write_report(cfg["out"], "criterion", lines)
    print(f"overall={'true' if all_pass else 'false'}")
    if cfg["plot"]:
        from .plotting import plot_criterion

        plot_criterion(
            grid, delta_spreads, gamma_spreads, tol, str(Path(cfg["out"]).with_suffix(".png"))
        )
    return 0 if all_pass else 3


def cmd_solve_masses(cfg: dict) -> int:
    curv = Curvature(cfg["kappa"])
    scale = tol_scale()
    p = PolygonConfig(curv, cfg["r"], cfg["omega"], cfg["alphas"], cfg["hemisphere"])
    sol = solve_masses(
        p,
        cfg["delta_target"],
        positivity_tol=1e-12 * scale,
        gamma_rel_tol=1e-9 * scale,
    )
    lines = [
        f"masses={fmt_list(sol.masses)}",
        f"gamma_residual={fmt(sol.gamma_residual)}",
        f"feasible={'true' if sol.feasible else 'false'}",
    ]
    _write_report(cfg["out"], "solve-masses", lines)
    print("\n".join(lines))
    return 0 if sol.feasible else 3


def cmd_fixed_point(cfg: dict) -> int:
    if len(cfg["thetas"]) != 3:
        raise CLIInputError(f"fixed-point: need exactly 3 thetas, got {len(cfg['thetas'])}")
    scale = tol_scale()
    tri = EquatorTriangle(Curvature(cfg["kappa"]), np.array(cfg["thetas"]))
    sol = solve_fixed_point_masses(
        tri, residual_tol=1e-10 * scale, accel_tol=1e-10 * scale
    )
    lines = [
        f"masses={fmt_list(sol.masses)}",
        f"detA_residual={fmt(sol.detA_residual)}",
        f"accel_residual={fmt(sol.accel_residual)}",
    ]
    _write_report(cfg["out"], "fixed-point", lines)
    print("\n".join(lines))
    if cfg["emit_config"]:
        k = cfg["kappa"]
        cfg_lines = [
            "# curved-nbody simulate config: relative equilibrium",
            f"kappa={fmt(k)}",
            f"masses={fmt_list(sol.masses)}",
            f"alphas={fmt_list(tri.angles)}",
            f"r={fmt(1.0 / math.sqrt(k))}",
            "omega=0",
            "r_dot=0",
            f"omega_dot={fmt(cfg['speed'] * math.sqrt(k))}",
            "hemisphere=1",
            "dt=0.0001",
            "t_end=10",
            "stride=100",
            "out=relative_equilibrium.csv",
        ]
        Path(cfg["emit_config"]).write_text("\n".join(cfg_lines) + "\n")
    if cfg["plot"] and cfg["out"]:
        from .plotting import plot_triangle

        plot_triangle(sol, str(Path(cfg["out"]).with_suffix(".png")))
    return 0


def cmd_isosceles(cfg: dict) -> int:
    res = isosceles_classify(cfg["M"], cfg["m"], cfg["kappa"])
    lines = [
        f"M={fmt(res.M)}",
        f"m={fmt(res.m)}",
        f"kappa={fmt(res.kappa)}",
        f"feasible={'true' if res.feasible else 'false'}",
    ]
    if res.feasible:
        lines += [f"y={fmt(res.y)}", f"x={fmt(res.x)}"]
    else:
        lines.append(f"witness={res.witness}")
    _write_report(cfg["out"], "isosceles", lines)
    print("\n".join(lines))
    return 0 if res.feasible else 3


_COMMANDS = {
    "simulate": cmd_simulate,
    "criterion": cmd_criterion,
    "solve-masses": cmd_solve_masses,
    "fixed-point": cmd_fixed_point,
    "isosceles": cmd_isosceles,
}

_HELP = {
    "simulate": "integrate a ring configuration and write a trajectory CSV",
    "criterion": "check the homographic criterion across a grid of sizes",
    "solve-masses": "solve the equal-delta system for polygon masses",
    "fixed-point": "solve equatorial fixed-point masses for a triangle",
    "isosceles": "classify the isosceles fixed-point family by mass ratio",
}


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that reports errors as typed exceptions (exit 1)."""

    def error(self, message: str):  # noqa: D102 - argparse hook
        raise CLIInputError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="curved-nbody", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, schema in _SCHEMAS.items():
        p = sub.add_parser(name, help=_HELP[name])
        p.add_argument("--config", help="key=value configuration file")
        for key in schema:
            if key.kind == "bool":
                p.add_argument(
                    f"--{key.name.replace('_', '-')}",
                    dest=key.name,
                    nargs="?",
                    const="true",
                    help=f"{key.name} (boolean)",
                )
            else:
                p.add_argument(
                    f"--{key.name.replace('_', '-')}", dest=key.name, help=key.name
                )
        p.set_defaults(func=_COMMANDS[name], schema_name=name)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = resolve(args.schema_name, args)
        return args.func(cfg)
    except CLIInputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (InvalidPolygon, InvalidCurvature, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except SingularityError as e:
        print(f"halted ({e.reason}): {e}", file=sys.stderr)
        return 2
    except (InfeasibleTriangle, CriterionViolation, ResidualTooLarge, SingularMatrix) as e:
        print(f"infeasible: {e}", file=sys.stderr)
        return 3
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except CurvedNBodyError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
