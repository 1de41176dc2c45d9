"""``wavepack`` command line.

Exit codes: 0 success, 2 invalid arguments or config, 3 numerical failure,
4 unresolvable collapse when ``--strict`` is given.
"""

import argparse
import io
import json
import logging
import os
from pathlib import Path
import sys
import tempfile
import time

import numpy as np

from . import __version__, kernels
from . import analysis
from . import variational as var
from .core import Observables
from .errors import ConvergenceFailure, InvalidInput, NonFinite, WavepackError
from .figures import FIGURES
from .pde import PdeConfig, TrajectoryStatus, evolve

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_COLLAPSE = 4

log = logging.getLogger("wavepack")


class _CollapseStrict(Exception):
    pass


# --- output helpers --------------------------------------------------------

def write_atomic(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(header, rows):
    buf = io.StringIO()
    np.savetxt(buf, np.atleast_2d(rows), fmt="%.17g", delimiter=",", header=header, comments="")
    return buf.getvalue()


def width_csv(t, width):
    return csv_text("t,width", np.column_stack([t, width]))


def pde_outputs(traj, out):
    out = Path(out)
    write_atomic(out / "width.csv", width_csv(traj.t, traj.width()))
    write_atomic(out / "observables.csv", csv_text(",".join(Observables.FIELDS), traj.series))
    buf = io.StringIO()
    buf.write("x," + ",".join(f"{v:.17g}" for v in traj.grid.x) + "\n")
    np.savetxt(buf, np.column_stack([traj.snapshot_times, traj.snapshots]), fmt="%.17g", delimiter=",")
    write_atomic(out / "density.csv", buf.getvalue())
    write_atomic(out / "grid.csv", f"n,L,dx\n{traj.grid.n},{traj.grid.length:.17g},{traj.grid.dx:.17g}\n")
    return ["width.csv", "observables.csv", "density.csv", "grid.csv"]


def write_manifest(out, subcommand, config, outputs, started, status=None, extra=None):
    doc = {
        "subcommand": subcommand,
        "config": config,
        "outputs": outputs,
        "tool_version": __version__,
        "kernel_backend": kernels.backend(),
        "wall_clock_seconds": round(time.perf_counter() - started, 6),
    }
    if status is not None:
        doc["status"] = status
    if extra:
        doc.update(extra)
    write_atomic(Path(out) / "manifest.json", json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _fmt(v):
    if v is None:
        return "none"
    return f"{v:.12g}"


# --- subcommands -----------------------------------------------------------

def _params_from_args(args):
    if args.mode == "free":
        if args.gamma is None:
            raise InvalidInput("--mode free requires --gamma")
        if args.beta is not None:
            raise InvalidInput("--beta is only valid with --mode trap")
        return var.FreeParams(args.gamma, args.delta0)
    if args.beta is None:
        raise InvalidInput("--mode trap requires --beta")
    if args.gamma is not None:
        raise InvalidInput("--gamma is only valid with --mode free")
    return var.TrapParams(args.beta, args.delta0, args.alpha)


def cmd_variational(args):
    started = time.perf_counter()
    params = _params_from_args(args)
    y0 = args.y0 if args.y0 is not None else args.delta0 ** 2
    series = var.integrate_width(params, y0, args.ydot0, args.t_end, args.dt)
    write_atomic(Path(args.out) / "width.csv", width_csv(series.t, series.width))
    config = {
        "mode": args.mode,
        "gamma": args.gamma,
        "beta": args.beta,
        "delta0": args.delta0,
        "alpha": args.alpha,
        "y0": y0,
        "ydot0": args.ydot0,
        "t_end": args.t_end,
        "dt": args.dt,
    }
    write_manifest(
        args.out, "variational", config, ["width.csv"], started,
        status=series.status.value, extra={"stop_time": series.stop_time},
    )
    return EXIT_OK


def _load_config(path):
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InvalidInput(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"config {path} is not valid JSON: {exc}") from exc
    return PdeConfig.from_dict(data)


def _run_pde(cfg, out, subcommand, strict, started):
    traj = evolve(cfg)
    outputs = pde_outputs(traj, out)
    write_manifest(out, subcommand, cfg.to_dict(), outputs, started, status=traj.status.value)
    if traj.status is TrajectoryStatus.NONFINITE:
        raise NonFinite(f"PDE run produced non-finite values; partial output in {out}")
    if strict and traj.status is TrajectoryStatus.COLLAPSE_UNRESOLVABLE:
        raise _CollapseStrict(f"collapse left the resolvable regime at t={traj.t[-1]:.6g}")
    return traj


def cmd_pde(args):
    started = time.perf_counter()
    cfg = _load_config(args.config)
    _run_pde(cfg, args.out, "pde", args.strict, started)
    return EXIT_OK


def cmd_analyze_critical(args):
    if args.mode != "free":
        raise InvalidInput("critical widths are defined for --mode free only")
    crit = var.free_critical(var.FreeParams(args.gamma, args.delta0))
    print(f"y_c={_fmt(crit.y_c)}")
    print(f"delta_c={_fmt(crit.delta_c)}")
    print(f"regime={crit.regime.value}")
    return EXIT_OK


def cmd_analyze_locus(args):
    beta, y_min, freq = analysis.locus_values(args.delta)
    print(f"beta={_fmt(beta)}")
    print(f"y_min={_fmt(y_min)}")
    print(f"freq={_fmt(freq)}")
    return EXIT_OK


def cmd_sweep_locus(args):
    started = time.perf_counter()
    if args.steps < 1:
        raise InvalidInput("--steps must be >= 1")
    deltas = np.linspace(args.delta_min, args.delta_max, args.steps)
    points = analysis.sweep_constant_width(deltas, args.tolerance, args.t_end, args.dt)
    rows = "".join(
        f"{p.delta:.17g},{p.beta:.17g},{p.y_min:.17g},{p.frequency:.17g},{p.max_excursion:.17g},{int(p.verified)}\n"
        for p in points
    )
    write_atomic(Path(args.out) / "locus.csv", "delta,beta,y_min,frequency,max_excursion,verified\n" + rows)
    config = {
        "delta_min": args.delta_min,
        "delta_max": args.delta_max,
        "steps": args.steps,
        "tolerance": args.tolerance,
        "t_end": args.t_end,
        "dt": args.dt,
    }
    write_manifest(
        args.out, "sweep locus", config, ["locus.csv"], started,
        extra={"all_verified": all(p.verified for p in points)},
    )
    return EXIT_OK


def _potential_csv(panel, npts=401):
    ys = np.linspace(0.0, panel.y_max, npts)
    vs = [var.effective_potential(float(y), panel.params) for y in ys]
    return csv_text("y,V", np.column_stack([ys, vs]))


def cmd_figures(args):
    started = time.perf_counter()
    fig = FIGURES.get(args.name)
    if fig is None:
        raise InvalidInput(f"unknown figure {args.name!r}; choose from {', '.join(FIGURES)}")
    out = Path(args.out)
    panels = []
    collapsed = []
    for panel in fig.panels:
        sub = out / panel.label
        entry = {"label": panel.label, "kind": panel.kind}
        if panel.kind == "potential":
            write_atomic(sub / "potential.csv", _potential_csv(panel))
            entry.update(params=vars(panel.params), outputs=["potential.csv"])
        elif panel.kind == "variational":
            series = var.integrate_width(panel.params, panel.y0, 0.0, panel.t_end, 1e-3)
            write_atomic(sub / "width.csv", width_csv(series.t, series.width))
            entry.update(
                params=vars(panel.params), y0=panel.y0, t_end=panel.t_end,
                status=series.status.value, outputs=["width.csv"],
            )
        else:
            traj = evolve(panel.config)
            entry.update(config=panel.config.to_dict(), status=traj.status.value, outputs=pde_outputs(traj, sub))
            if traj.status is TrajectoryStatus.NONFINITE:
                raise NonFinite(f"panel {panel.label} produced non-finite values")
            if traj.status is TrajectoryStatus.COLLAPSE_UNRESOLVABLE:
                collapsed.append(panel.label)
        panels.append(entry)
    write_manifest(out, "figures", {"name": fig.name, "title": fig.title}, [], started, extra={"panels": panels})
    if args.strict and collapsed:
        raise _CollapseStrict(f"unresolvable collapse in panels: {', '.join(collapsed)}")
    return EXIT_OK


# --- parser ----------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(prog="wavepack", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("variational", help="integrate the width ODE")
    p.add_argument("--mode", choices=["free", "trap"], required=True)
    p.add_argument("--gamma", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--delta0", type=float, required=True, help="initial width (delta0 free, delta trap)")
    p.add_argument("--alpha", type=float, default=0.0, help="trap centre offset; recorded only")
    p.add_argument("--y0", type=float, help="initial Y (default delta0^2)")
    p.add_argument("--ydot0", type=float, default=0.0)
    p.add_argument("--t-end", type=float, required=True)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_variational)

    p = sub.add_parser("pde", help="split-step run from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--strict", action="store_true", help="exit 4 on unresolvable collapse")
    p.set_defaults(func=cmd_pde)

    p = sub.add_parser("analyze", help="closed-form queries")
    asub = p.add_subparsers(dest="what", required=True)
    q = asub.add_parser("critical", help="free-particle barrier and critical width")
    q.add_argument("--mode", choices=["free"], required=True)
    q.add_argument("--gamma", type=float, required=True)
    q.add_argument("--delta0", type=float, required=True)
    q.set_defaults(func=cmd_analyze_critical)
    q = asub.add_parser("locus", help="constant-width coupling for a trap width")
    q.add_argument("--delta", type=float, required=True)
    q.set_defaults(func=cmd_analyze_locus)

    p = sub.add_parser("sweep", help="parameter sweeps")
    ssub = p.add_subparsers(dest="what", required=True)
    q = ssub.add_parser("locus", help="verify the constant-width locus over a delta range")
    q.add_argument("--delta-min", type=float, required=True)
    q.add_argument("--delta-max", type=float, required=True)
    q.add_argument("--steps", type=int, required=True)
    q.add_argument("--tolerance", type=float, default=1e-6)
    q.add_argument("--t-end", type=float, default=20.0)
    q.add_argument("--dt", type=float, default=1e-3)
    q.add_argument("--out", required=True)
    q.set_defaults(func=cmd_sweep_locus)

    p = sub.add_parser("figures", help="reproduce a figure's data from its caption parameters")
    p.add_argument("--name", required=True, help=", ".join(FIGURES))
    p.add_argument("--out", required=True)
    p.add_argument("--strict", action="store_true", help="exit 4 on unresolvable collapse")
    p.set_defaults(func=cmd_figures)
    return ap


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except _CollapseStrict as exc:
        print(f"collapse: {exc}", file=sys.stderr)
        return EXIT_COLLAPSE
    except (NonFinite, ConvergenceFailure, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (InvalidInput, WavepackError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
