"""Command-line front end: trajectories, sweeps, solver comparisons, verification, drag.

Outputs are machine-readable (CSV with an `t,u,du` header or versioned
JSON), floats are written in shortest round-trip form, and files are
replaced atomically, so identical configurations produce byte-identical
results.  Exit codes: 0 success (and, for `verify`, all checks passed),
1 usage error, 2 verification failure (reports still written),
3 numerical failure (overflow/divergence).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import analysis, analytic, ide, ode, physical
from .ide import Trajectory

__all__ = ["RunConfig", "run", "main"]

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFICATION = 2
EXIT_NUMERICAL = 3


@dataclass
class RunConfig:
    """Parsed invocation: one command plus the knobs it needs."""

    command: str
    kappa: float | None = None
    kappas: list[float] = field(default_factory=list)
    solver: str = "closed-form"
    h: float = 1e-3
    T: float = 10.0
    t0: float = 0.0
    A: float = 1.0
    b: float | None = None
    eps: float = 0.0
    output: str = "csv"
    out: str = "-"
    params: physical.PhysicalParams | None = None
    suite_points: int = 400


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse default exits with code 2
        raise _UsageError(message)


# ----------------------------------------------------------------------
# Output helpers
# ----------------------------------------------------------------------

def _fmt(x: float) -> str:
    return repr(float(x))


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv_text(header: list[str], rows: list[list[float]]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(x) for x in row))
    return "\n".join(lines) + "\n"


def _emit(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        _atomic_write(path, text)


def _trajectory_payload(traj: Trajectory) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "meta": {k: v for k, v in traj.meta.items()},
        "t": [float(x) for x in traj.times],
        "u": [float(x) for x in traj.values],
        "du": [float(x) for x in traj.derivatives],
    }


def _write_trajectory(cfg: RunConfig, traj: Trajectory, path: str) -> None:
    if cfg.output == "json":
        _emit(path, json.dumps(_trajectory_payload(traj), indent=1) + "\n")
    else:
        rows = [
            [t, u, du]
            for t, u, du in zip(traj.times, traj.values, traj.derivatives)
        ]
        _emit(path, _csv_text(["t", "u", "du"], rows))


# ----------------------------------------------------------------------
# Solvers behind the `trajectory`/`compare` commands
# ----------------------------------------------------------------------

def _closed_form_sphere(kappa: float, eps: float, h: float, T: float) -> Trajectory:
    n = max(1, int(round(T / h)))
    times = np.arange(n + 1) * h
    values = np.array([analytic.u_general(t, kappa, eps) for t in times])
    derivs = (1.0 - eps) * np.array(
        [analytic.u_rest_derivative(t, kappa) for t in times]
    )
    meta = {"solver": "closed-form", "kappa": kappa, "eps": eps, "h": h, "T": n * h}
    return Trajectory(times=times, values=values, derivatives=derivs, meta=meta)


def _ode_sphere(kappa: float, eps: float, h: float, T: float) -> Trajectory:
    prob = ode.OscillatorProblem(
        b=2.0 - kappa, A=math.sqrt(kappa), t0=0.0, v0=eps - 1.0, v0_prime=1.0 - eps
    )
    vtraj = ode.solve_oscillator(prob, h, T)
    meta = dict(vtraj.meta)
    meta.update({"kappa": kappa, "eps": eps, "variable": "u"})
    return Trajectory(
        times=vtraj.times,
        values=vtraj.values + 1.0,
        derivatives=vtraj.derivatives,
        meta=meta,
    )


def _sphere_trajectory(solver: str, kappa: float, eps: float, h: float, T: float) -> Trajectory:
    if solver == "closed-form":
        return _closed_form_sphere(kappa, eps, h, T)
    if solver == "ide":
        return ide.solve_ide(kappa, eps, h, T)
    if solver == "ode":
        return _ode_sphere(kappa, eps, h, T)
    raise _UsageError(f"unknown solver {solver!r}")


def _oscillator_trajectory(cfg: RunConfig) -> Trajectory:
    if cfg.solver == "ide":
        raise _UsageError("the ide solver applies to the sphere problem only")
    ic = analytic.monotone_initial_conditions(cfg.b, cfg.A, cfg.t0)
    if cfg.solver == "closed-form":
        n = max(1, int(round(cfg.T / cfg.h)))
        times = np.arange(n + 1) * cfg.h
        values = np.array(
            [analytic.monotone_kernel_M(t + cfg.t0, cfg.b) * cfg.A for t in times]
        )
        derivs = np.array(
            [analytic.monotone_kernel_M_derivative(t + cfg.t0, cfg.b) * cfg.A for t in times]
        )
        meta = {"solver": "closed-form", "b": cfg.b, "A": cfg.A, "t0": cfg.t0,
                "h": cfg.h, "T": n * cfg.h, "variable": "v"}
        return Trajectory(times=times, values=values, derivatives=derivs, meta=meta)
    prob = ode.OscillatorProblem(
        b=cfg.b, A=cfg.A, t0=cfg.t0, v0=ic.v0, v0_prime=ic.v0_prime
    )
    return ode.solve_oscillator(prob, cfg.h, cfg.T)


# ----------------------------------------------------------------------
# Commands
# ----------------------------------------------------------------------

def _cmd_trajectory(cfg: RunConfig) -> int:
    if cfg.b is not None:
        traj = _oscillator_trajectory(cfg)
    else:
        traj = _sphere_trajectory(cfg.solver, cfg.kappa, cfg.eps, cfg.h, cfg.T)
    _write_trajectory(cfg, traj, cfg.out)
    if traj.meta.get("diverged"):
        return EXIT_NUMERICAL
    return EXIT_OK


def _sweep_one(cfg: RunConfig, kappa: float) -> dict:
    traj = _sphere_trajectory(cfg.solver, kappa, cfg.eps, cfg.h, cfg.T)
    tol = 1e-12 if cfg.solver == "closed-form" else 10.0 * cfg.h
    mono = analysis.check_monotone(traj, tol=tol)
    path = os.path.join(cfg.out, f"trajectory_kappa_{kappa:g}.{cfg.output}")
    _write_trajectory(cfg, traj, path)
    return {
        "kappa": kappa,
        "terminal_error": abs(float(traj.values[-1]) - 1.0),
        "monotone": mono.passed,
        "file": os.path.basename(path),
    }


def _cmd_sweep(cfg: RunConfig) -> int:
    os.makedirs(cfg.out, exist_ok=True)
    # Per-kappa solves are independent; run them concurrently.
    with ThreadPoolExecutor(max_workers=min(8, len(cfg.kappas))) as pool:
        results = list(pool.map(lambda k: _sweep_one(cfg, k), cfg.kappas))
    results.sort(key=lambda r: r["kappa"])
    summary_path = os.path.join(cfg.out, f"sweep_summary.{cfg.output}")
    if cfg.output == "json":
        _atomic_write(
            summary_path,
            json.dumps({"schema": SCHEMA_VERSION, "sweep": results}, indent=1) + "\n",
        )
    else:
        lines = ["kappa,terminal_error,monotone,file"]
        for r in results:
            lines.append(
                f"{_fmt(r['kappa'])},{_fmt(r['terminal_error'])},"
                f"{str(r['monotone']).lower()},{r['file']}"
            )
        _atomic_write(summary_path, "\n".join(lines) + "\n")
    return EXIT_OK


def _cmd_compare(cfg: RunConfig) -> int:
    closed = _sphere_trajectory("closed-form", cfg.kappa, cfg.eps, cfg.h, cfg.T)
    ide_traj = _sphere_trajectory("ide", cfg.kappa, cfg.eps, cfg.h, cfg.T)
    ode_traj = _sphere_trajectory("ode", cfg.kappa, cfg.eps, cfg.h, cfg.T)
    n = min(len(closed), len(ide_traj), len(ode_traj))
    dev_ide = np.abs(ide_traj.values[:n] - closed.values[:n])
    dev_ode = np.abs(ode_traj.values[:n] - closed.values[:n])
    sup = {"ide": float(np.max(dev_ide)), "ode": float(np.max(dev_ode))}
    if cfg.output == "json":
        payload = {
            "schema": SCHEMA_VERSION,
            "kappa": cfg.kappa,
            "h": cfg.h,
            "T": cfg.T,
            "sup_norm": sup,
            "t": [float(x) for x in closed.times[:n]],
            "u_closed": [float(x) for x in closed.values[:n]],
            "u_ide": [float(x) for x in ide_traj.values[:n]],
            "u_ode": [float(x) for x in ode_traj.values[:n]],
            "dev_ide": [float(x) for x in dev_ide],
            "dev_ode": [float(x) for x in dev_ode],
        }
        _emit(cfg.out, json.dumps(payload, indent=1) + "\n")
    else:
        rows = [
            [closed.times[i], closed.values[i], ide_traj.values[i],
             ode_traj.values[i], dev_ide[i], dev_ode[i]]
            for i in range(n)
        ]
        _emit(cfg.out, _csv_text(
            ["t", "u_closed", "u_ide", "u_ode", "dev_ide", "dev_ode"], rows))
        if cfg.out != "-":
            _atomic_write(
                cfg.out + ".summary.json",
                json.dumps({"schema": SCHEMA_VERSION, "sup_norm": sup}, indent=1) + "\n",
            )
    print(f"sup-norm ide={sup['ide']:.6g} ode={sup['ode']:.6g}", file=sys.stderr)
    return EXIT_OK


def _cmd_verify(cfg: RunConfig) -> int:
    reports = analysis.run_default_suite(h=cfg.h, points=cfg.suite_points)
    for rep in reports:
        status = "PASS" if rep.passed else "FAIL"
        print(
            f"{status} {rep.check_id}: worst={rep.worst_violation:.3e} "
            f"tol={rep.tolerance:.3e} at {rep.location}"
        )
    payload = {
        "schema": SCHEMA_VERSION,
        "passed": all(r.passed for r in reports),
        "reports": [dataclasses.asdict(r) for r in reports],
    }
    if cfg.out != "-":
        _atomic_write(cfg.out, json.dumps(payload, indent=1) + "\n")
    return EXIT_OK if payload["passed"] else EXIT_VERIFICATION


def _cmd_drag(cfg: RunConfig) -> int:
    p = cfg.params
    group = physical.nondimensionalize(p)
    # h and T arrive in seconds; the solver works in viscous-time units.
    traj = ide.solve_ide(group.kappa, cfg.eps, cfg.h * group.B, cfg.T * group.B)
    dim = physical.dimensional_trajectory(group, traj)
    coef_basset = 6.0 * math.pi * p.rho * p.R**2 * math.sqrt(p.nu / math.pi)
    f_buoy = physical.buoyancy_force(p)
    rows = []
    for i, t in enumerate(dim.times):
        u, du = dim.values[i], dim.derivatives[i]
        f_stokes = 6.0 * math.pi * p.mu * p.R * u
        f_added = 0.5 * p.rho * p.volume * du
        f_basset = coef_basset * ide.basset_integral(dim, i)
        residual = p.rho_s * p.volume * du + (f_stokes + f_added + f_basset) - f_buoy
        rows.append([t, u, du, f_stokes, f_added, f_basset, f_buoy, residual])
    header = ["t", "U", "dU", "F_stokes", "F_added_mass", "F_basset", "F_buoyancy",
              "residual"]
    if cfg.output == "json":
        payload = {
            "schema": SCHEMA_VERSION,
            "columns": header,
            "rows": [[float(x) for x in row] for row in rows],
        }
        _emit(cfg.out, json.dumps(payload, indent=1) + "\n")
    else:
        _emit(cfg.out, _csv_text(header, rows))
    return EXIT_OK


def run(config: RunConfig) -> int:
    """Execute one parsed command; returns the process exit status."""
    handlers = {
        "trajectory": _cmd_trajectory,
        "sweep": _cmd_sweep,
        "compare": _cmd_compare,
        "verify": _cmd_verify,
        "drag": _cmd_drag,
    }
    return handlers[config.command](config)


# ----------------------------------------------------------------------
# Argument parsing
# ----------------------------------------------------------------------

def _build_parser() -> _Parser:
    parser = _Parser(
        prog="spherefall",
        description="Transient sedimentation of a sphere in creeping Newtonian flow.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp, with_solver=True):
        sp.add_argument("--h", type=float, default=1e-3, help="step size")
        sp.add_argument("--T", type=float, default=10.0, help="horizon")
        sp.add_argument("--output", choices=("csv", "json"), default="csv")
        sp.add_argument("--out", default="-", help="output path ('-' = stdout)")
        if with_solver:
            sp.add_argument(
                "--solver", choices=("closed-form", "ide", "ode"), default="closed-form"
            )

    sp = sub.add_parser("trajectory", help="one trajectory (sphere or forced oscillator)")
    sp.add_argument("--kappa", type=float, help="density parameter of the sphere problem")
    sp.add_argument("--eps", type=float, default=0.0, help="initial velocity u(0)")
    sp.add_argument("--b", type=float, help="oscillator damping (enables oscillator mode)")
    sp.add_argument("--A", type=float, default=1.0, help="oscillator forcing amplitude")
    sp.add_argument("--t0", type=float, default=0.0, help="oscillator forcing offset")
    add_common(sp)

    sp = sub.add_parser("sweep", help="sphere trajectories over a list of kappa values")
    sp.add_argument("--kappas", required=True,
                    help="comma-separated kappa list, e.g. 0.5,1,2.5")
    sp.add_argument("--eps", type=float, default=0.0)
    add_common(sp)
    sp.set_defaults(out="sweep_out")

    sp = sub.add_parser("compare", help="closed-form vs IDE vs ODE on one grid")
    sp.add_argument("--kappa", type=float, required=True)
    sp.add_argument("--eps", type=float, default=0.0)
    add_common(sp, with_solver=False)

    sp = sub.add_parser("verify", help="run the verification suite")
    sp.add_argument("--h", type=float, default=1e-3)
    sp.add_argument("--points", type=int, default=400, help="closed-form grid density")
    sp.add_argument("--out", default="-", help="JSON report path")

    sp = sub.add_parser("drag", help="dimensional force decomposition along a solve")
    sp.add_argument("--rho-s", type=float, required=True, dest="rho_s")
    sp.add_argument("--rho", type=float, required=True)
    sp.add_argument("--mu", type=float, required=True)
    sp.add_argument("--radius", type=float, required=True)
    sp.add_argument("--g", type=float, default=9.81)
    sp.add_argument("--eps", type=float, default=0.0, help="initial velocity / U0")
    sp.add_argument("--h", type=float, default=1e-4, help="step size in seconds")
    sp.add_argument("--T", type=float, default=0.1, help="horizon in seconds")
    sp.add_argument("--output", choices=("csv", "json"), default="csv")
    sp.add_argument("--out", default="-")
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command)
    for name in ("kappa", "solver", "h", "T", "t0", "A", "b", "eps", "output", "out"):
        if hasattr(args, name) and getattr(args, name) is not None:
            setattr(cfg, name, getattr(args, name))
    if args.command == "trajectory":
        if cfg.b is None and cfg.kappa is None:
            raise _UsageError("trajectory: provide --kappa (sphere) or --b (oscillator)")
        if cfg.b is not None and cfg.kappa is not None:
            raise _UsageError("trajectory: --kappa and --b are mutually exclusive")
    if args.command == "sweep":
        try:
            cfg.kappas = [float(s) for s in args.kappas.split(",") if s.strip()]
        except ValueError as exc:
            raise _UsageError(f"sweep: bad --kappas list: {exc}") from exc
        if not cfg.kappas:
            raise _UsageError("sweep: --kappas list is empty")
    if args.command == "verify":
        cfg.suite_points = args.points
    if args.command == "drag":
        cfg.params = physical.PhysicalParams(
            rho_s=args.rho_s, rho=args.rho, mu=args.mu, R=args.radius, g=args.g
        )
    return cfg


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _config_from_args(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return run(cfg)
    except (_UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ArithmeticError as exc:  # includes OverflowError and AccuracyError
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
