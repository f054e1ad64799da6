"""``qflow`` command-line front end.

Exit codes: 0 success, 1 usage error, 2 numeric or domain error.
Inputs are in atomic units and radians; ``--units`` only rescales output.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import dataclass

import numpy as np

from qflow import analysis, currents, eigenstates, units, verify
from qflow.errors import QflowError
from qflow.geometry import SphericalPoint, spherical_to_cartesian

SAMPLE_HEADER = ["r", "theta", "phi", "x", "y", "z", "rho", "J_r", "J_theta", "J_phi", "v_r", "v_theta", "v_phi"]
TRAJECTORY_HEADER = ["t", "x", "y", "z", "r", "theta", "phi"]
COMPARE_HEADER = [
    "r",
    "theta",
    "phi",
    "v_dirac",
    "v_schrodinger_gordon",
    "v_classical",
    "abs_deviation",
    "rel_deviation",
    "error",
]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def fmt(x) -> str:
    return format(float(x), ".17g")


# ---------------------------------------------------------------------------
# argument parsing helpers


@dataclass(frozen=True)
class GridSpec:
    r: np.ndarray
    theta: np.ndarray
    phi: np.ndarray


def _axis(text: str, key: str, default_kind: str) -> np.ndarray:
    parts = text.split(":")
    try:
        if len(parts) == 3:
            lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
            if n < 1:
                raise ValueError
            return np.linspace(lo, hi, n)
        if len(parts) == 1:
            n = int(parts[0])
            if n < 1:
                raise ValueError
            if default_kind == "theta":
                return (np.arange(n) + 0.5) * (math.pi / n)
            return np.arange(n) * (2.0 * math.pi / n)
    except ValueError:
        pass
    raise UsageError(f"bad grid axis {key}={text!r}")


def parse_grid(text: str) -> GridSpec:
    """``r=min:max:count,theta=count|min:max:count,phi=count|min:max:count``.

    A bare theta count is spread over the open interval (0, pi); a bare phi
    count over [0, 2 pi).
    """
    axes = {}
    for item in text.split(","):
        key, sep, val = item.partition("=")
        key = key.strip()
        if not sep or key not in ("r", "theta", "phi"):
            raise UsageError(f"bad grid item {item!r}")
        axes[key] = val.strip()
    if "r" not in axes or len(axes["r"].split(":")) != 3:
        raise UsageError("grid needs r=min:max:count")
    r = _axis(axes["r"], "r", "r")
    if r.min() <= 0:
        raise UsageError("grid r.min must be > 0")
    theta = _axis(axes.get("theta", "1"), "theta", "theta")
    if theta.min() < 0 or theta.max() > math.pi:
        raise UsageError("grid theta must lie in [0, pi]")
    phi = _axis(axes.get("phi", "1"), "phi", "phi")
    return GridSpec(r, theta, phi)


def _floats(text: str, n: int, what: str) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"bad {what} {text!r}") from None
    if len(vals) != n:
        raise UsageError(f"{what} needs {n} comma-separated values")
    return vals


def parse_spin(text: str):
    text = text.strip().lower()
    if text in ("up", "down", "none", "auto"):
        return text
    return tuple(_floats(text, 3, "spin vector"))


def build_state(args):
    """Schrodinger state, or a Dirac state when --system dirac."""
    if args.system == "dirac":
        n, l, m = _floats(args.state, 3, "state")
        if (n, l) != (1, 0):
            raise UsageError("only the Dirac 1s state (1,0,+-0.5) is built in")
        return eigenstates.dirac_1s_state(m)
    vals = _floats(args.state, 3, "state")
    if any(v != int(v) for v in vals):
        raise UsageError(f"state must be integers, got {args.state!r}")
    qn = tuple(int(v) for v in vals)
    if args.system == "hydrogen":
        return eigenstates.hydrogen_state(qn)
    if args.basis == "cartesian":
        return eigenstates.oscillator_cartesian_state(qn, args.omega)
    return eigenstates.oscillator_state(qn, args.omega)


# ---------------------------------------------------------------------------
# subcommands


def _out(args):
    if args.output in (None, "-"):
        return sys.stdout
    return open(args.output, "w", newline="")


def _write(args, text: str) -> None:
    fh = _out(args)
    try:
        fh.write(text)
    finally:
        if fh is not sys.stdout:
            fh.close()


def cmd_constants(args) -> int:
    k = units.constants(args.units)
    lines = [f"units = {k.system.value}"]
    lines += [f"{key} = {fmt(val)}" for key, val in k.as_dict().items()]
    print("\n".join(lines))
    return 0


def _sample_rows(state, spin, grid: GridSpec, system: units.UnitSystem):
    rows, skipped, nodes = [], 0, 0
    conv = lambda v, q: units.convert(v, q, units.UnitSystem.ATOMIC, system)  # noqa: E731
    dirac = isinstance(state, eigenstates.DiracHydrogenState)
    for r in grid.r:
        for th in grid.theta:
            if th == 0.0 or th == math.pi:
                skipped += len(grid.phi)
                continue
            for ph in grid.phi:
                p = SphericalPoint(float(r), float(th), float(ph))
                if dirac:
                    rho = state.rho(p)
                    J = (0.0, 0.0, float(state.current_phi(p.r, p.theta, p.phi)))
                else:
                    rho = state.rho(p)
                    J = tuple(currents.total_current(state, spin, p))
                if rho < currents.NODE_TOLERANCE:
                    v = (math.nan,) * 3
                    nodes += 1
                else:
                    v = tuple(c / rho for c in J)
                x, y, z = spherical_to_cartesian(p.r, p.theta, p.phi)
                rows.append(
                    [conv(p.r, "length"), p.theta, p.phi]
                    + [conv(c, "length") for c in (x, y, z)]
                    + [conv(rho, "density")]
                    + [conv(c, "current") for c in J]
                    + [conv(c, "velocity") for c in v]
                )
    return rows, skipped, nodes


def cmd_sample(args) -> int:
    grid = parse_grid(args.grid)
    state = build_state(args)
    spin = currents.resolve_spin(parse_spin(args.spin), state)
    system = units.UnitSystem.parse(args.units)
    rows, skipped, nodes = _sample_rows(state, spin, grid, system)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SAMPLE_HEADER)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    if skipped or nodes:
        buf.write(f"# skipped_on_axis={skipped} nodes={nodes}\n")
        if skipped:
            print(f"warning: skipped {skipped} on-axis grid points", file=sys.stderr)
    _write(args, buf.getvalue())
    return 0


def cmd_verify(args) -> int:
    results = verify.run_checks(args.suite)
    print(verify.format_table(results))
    return 0 if all(r.passed for r in results) else 2


def _trajectory_csv(tr: analysis.Trajectory, system: units.UnitSystem) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRAJECTORY_HEADER)
    a = units.UnitSystem.ATOMIC
    for t, x, y, z, r, th, ph in tr.rows():
        w.writerow(
            [fmt(units.convert(t, "time", a, system))]
            + [fmt(units.convert(c, "length", a, system)) for c in (x, y, z, r)]
            + [fmt(th), fmt(ph)]
        )
    return buf.getvalue()


def cmd_streamline(args) -> int:
    state = build_state(args)
    start = SphericalPoint(*_floats(args.start, 3, "start point"))
    system = units.UnitSystem.parse(args.units)
    if isinstance(state, eigenstates.DiracHydrogenState):
        vel = lambda p: currents.dirac_velocity(state, p)  # noqa: E731
    else:
        vel = analysis.state_velocity(state, parse_spin(args.spin))
    try:
        tr = analysis.streamline(vel, start, args.dt, args.steps, label=state.label)
    except analysis.StreamlineError as exc:
        _write(args, _trajectory_csv(exc.trajectory, system))
        raise
    _write(args, _trajectory_csv(tr, system))
    return 0


def cmd_compare(args) -> int:
    if args.points:
        pts = []
        for chunk in args.points.split(";"):
            if chunk.strip():
                pts.append(SphericalPoint(*_floats(chunk, 3, "point")))
    else:
        g = parse_grid(args.grid)
        pts = [SphericalPoint(float(r), float(t), float(p)) for r in g.r for t in g.theta for p in g.phi]
    if args.m in ("+", "+0.5", "0.5", "+1/2"):
        m = 0.5
    elif args.m in ("-", "-0.5", "-1/2"):
        m = -0.5
    else:
        raise UsageError(f"--m must be + or -, got {args.m!r}")
    rep = analysis.compare_dirac_schrodinger(pts, m)
    system = units.UnitSystem.parse(args.units)
    a = units.UnitSystem.ATOMIC
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COMPARE_HEADER)
    for rec in rep.records:
        p = rec.point
        vel = [units.convert(v, "velocity", a, system) for v in (rec.v_dirac, rec.v_schrodinger_gordon, rec.v_classical)]
        w.writerow(
            [fmt(units.convert(p.r, "length", a, system)), fmt(p.theta), fmt(p.phi)]
            + [fmt(v) for v in vel]
            + [fmt(units.convert(rec.abs_deviation, "velocity", a, system)), fmt(rec.rel_deviation), rec.error or ""]
        )
    buf.write(f"# max_abs_deviation={fmt(rep.max_abs_deviation)} max_rel_deviation={fmt(rep.max_rel_deviation)}\n")
    _write(args, buf.getvalue())
    return 2 if rep.n_errors else 0


# ---------------------------------------------------------------------------


def _add_state_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--system", choices=["hydrogen", "oscillator", "dirac"], default="hydrogen")
    p.add_argument("--basis", choices=["spherical", "cartesian"], default="spherical", help="oscillator basis")
    p.add_argument("--omega", type=float, default=1.0, help="oscillator angular frequency (a.u.)")
    p.add_argument("--state", default="1,0,0", help="n,l,m (oscillator: n_r,l,m or nx,ny,nz; dirac: 1,0,+-0.5)")
    p.add_argument("--spin", default="auto", help="up, down, none, auto (sign of m) or sx,sy,sz direction")
    p.add_argument("--units", choices=["atomic", "si"], default="atomic")
    p.add_argument("-o", "--output", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qflow", description="Probability currents of hydrogen and oscillator eigenstates.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("constants", help="print the constant table")
    p.add_argument("--units", choices=["atomic", "si"], default="atomic")
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("sample", help="sample rho, J and v on a grid to CSV")
    _add_state_args(p)
    p.add_argument("--grid", required=True, help="r=min:max:n,theta=n,phi=n")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("verify", help="run the identity checks")
    p.add_argument("--suite", default="all", choices=["all"] + verify.suites())
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("streamline", help="trace a flow line of v = J / rho")
    _add_state_args(p)
    p.add_argument("--start", required=True, help="r,theta,phi (a.u., radians)")
    p.add_argument("--dt", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.set_defaults(func=cmd_streamline)

    p = sub.add_parser("compare", help="Dirac vs Schrodinger+Gordon 1s velocities")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--points", help="r,theta,phi;r,theta,phi;...")
    g.add_argument("--grid")
    p.add_argument("--m", default="+", help="+ or - (Dirac magnetic number sign)")
    p.add_argument("--units", choices=["atomic", "si"], default="atomic")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_compare)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_usage().rstrip() + "\nqflow: error: a subcommand is required")
        return args.func(args)
    except UsageError as exc:
        print(str(exc).rstrip(), file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except QflowError as exc:
        print(f"qflow: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"qflow: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))
