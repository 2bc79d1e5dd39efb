"""Command-line entry point.

Every subcommand reads an optional JSON config whose keys are the long flag
names (with underscores); flags given on the command line win.  With
``--out`` the artifacts and the resolved config land in that directory,
otherwise documents go to standard output.

Exit codes: 0 success, 1 usage error, 2 validation failure, 3 runtime failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import experiment, fitting, io
from .decoder import DecodeError
from .fusion_graph import OPEN, PERIODIC, SHIFTED, build_cubic
from .noise import FIBER_DB_PER_KM, FIBER_M_PER_NS, NoiseParams, noise_table, per_bin_loss
from .scheduler import (
    LAYERED, TORIC, Scheme, assign_coordinates, build_netlist, classify_fusion,
    delay_requirements, interleaving_ratio, validate,
)

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_RUNTIME = 0, 1, 2, 3

# published thresholds against which `reproduce-table2` compares
REFERENCE_THRESHOLDS = {1: 0.027, 32: 0.026, 71: 0.023, 100: 0.019}
# first grid point of the desk sweep for each rastering length
GRID_START = {1: 0.021, 32: 0.020, 71: 0.017, 100: 0.013}
GRID_POINTS, GRID_STEP = 7, 0.002
PROBE_BINS = (1, 1024, 5041, 10000)

log = logging.getLogger("interleaving")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="JSON file with default values for any flag")
    p.add_argument("--seed", type=int, help="master seed (unsigned 64-bit)")
    p.add_argument("--workers", type=int, help="worker processes, 0 = one per CPU")
    p.add_argument("--out", type=Path, help="output directory")
    p.add_argument("--paper-scale", action="store_true", default=None,
                   help="distances 12, 16, 20 and at least 15000 trials per point")


def _graph_flags(p):
    p.add_argument("--dims", type=int, nargs=3, metavar=("RX", "RY", "RZ"))
    p.add_argument("--boundary", nargs="+", choices=(PERIODIC, OPEN, SHIFTED),
                   help="one flag for all axes or one per axis")
    p.add_argument("--blocks", type=int, help="split z into this many disconnected cuboids")


def _scheme_flags(p):
    p.add_argument("--scheme", choices=("trivial", "layered", "rastered", "abcd", "toric"))
    p.add_argument("--size", type=int, help="k, L or M of the scheme")
    p.add_argument("--grid", type=int, nargs=2, metavar=("NX", "NY"), help="module grid")


def _sweep_flags(p, single_L=True):
    if single_L:
        p.add_argument("--L", type=int, help="rastering length")
    p.add_argument("--distances", type=int, nargs="+")
    p.add_argument("--p-start", type=float)
    p.add_argument("--p-stop", type=float)
    p.add_argument("--p-step", type=float)
    p.add_argument("--trials", type=int)
    p.add_argument("--p-clock", type=float, help="loss per delay bin")
    p.add_argument("--n-boot", type=int, help="bootstrap resamples for the threshold error")
    p.add_argument("--correlated", action="store_true", default=None,
                   help="erase primal and dual outcomes of a fusion together")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="interleaving", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("build-graph", help="emit a cubic fusion graph")
    _common(p), _graph_flags(p)

    p = sub.add_parser("schedule", help="emit interleaving coordinates and fusion classes")
    _common(p), _graph_flags(p), _scheme_flags(p)

    p = sub.add_parser("validate-netlist", help="replay every fusion through a netlist")
    _common(p), _graph_flags(p), _scheme_flags(p)
    p.add_argument("--mutate", action="append", metavar="COMPONENT=LENGTH",
                   help="override one delay component before validating")

    p = sub.add_parser("probe-noise", help="delay loss and erasure probabilities per delay")
    _common(p)
    p.add_argument("--p-baseline", type=float)
    p.add_argument("--db-per-km", type=float)
    p.add_argument("--m-per-bin", type=float)
    p.add_argument("--bins", type=int, nargs="+")

    p = sub.add_parser("run-sweep", help="Monte Carlo sweep plus threshold fit")
    _common(p), _sweep_flags(p)

    p = sub.add_parser("fit-threshold", help="refit a threshold from a sweep CSV")
    _common(p)
    p.add_argument("--csv", type=Path)
    p.add_argument("--n-boot", type=int)
    p.add_argument("--interpolation", action="store_true", default=None,
                   help="cross raw rates instead of fitted curves")

    p = sub.add_parser("reproduce-table2", help="thresholds for the tabulated rastering lengths")
    _common(p), _sweep_flags(p, single_L=False)
    p.add_argument("--Ls", type=int, nargs="+")
    return parser


DEFAULTS = {
    "seed": 0, "workers": 1, "out": None, "paper_scale": False,
    "dims": None, "boundary": None, "blocks": None,
    "scheme": "rastered", "size": 4, "grid": [2, 2], "mutate": [],
    "p_baseline": 0.0, "db_per_km": FIBER_DB_PER_KM, "m_per_bin": FIBER_M_PER_NS,
    "bins": list(PROBE_BINS),
    "L": 1, "distances": list(experiment.DESK_DISTANCES), "p_start": None, "p_stop": None,
    "p_step": GRID_STEP, "trials": experiment.DESK_TRIALS, "p_clock": experiment.P_CLOCK,
    "n_boot": 200, "correlated": False,
    "csv": None, "interpolation": False, "Ls": list(REFERENCE_THRESHOLDS),
}


def resolve(args: argparse.Namespace) -> dict:
    """Defaults, then the config file, then explicit flags."""
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "config", "verbose")}
    cfg = {k: DEFAULTS.get(k) for k in flags}
    if args.config is not None:
        try:
            loaded = io.read_json(args.config)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise UsageError("config must be a JSON object")
        unknown = sorted(set(loaded) - set(flags))
        if unknown:
            raise UsageError(f"unknown config keys for {args.command}: {', '.join(unknown)}")
        cfg.update(loaded)
    cfg.update({k: v for k, v in flags.items() if v is not None})
    for key in ("out", "csv"):
        if cfg.get(key) is not None:
            cfg[key] = Path(cfg[key])
    if cfg.get("seed") is not None and not 0 <= int(cfg["seed"]) < 2 ** 64:
        raise UsageError("seed must be an unsigned 64-bit integer")
    if cfg.get("workers") is not None and int(cfg["workers"]) < 0:
        raise UsageError("workers must be >= 0")
    if cfg.get("paper_scale"):
        cfg["distances"] = list(experiment.LARGE_DISTANCES)
        cfg["trials"] = max(int(cfg["trials"]), experiment.LARGE_TRIALS)
    return cfg


def _archive(cfg: dict, command: str) -> None:
    if cfg.get("out") is None:
        return
    record = {k: (str(v) if isinstance(v, Path) else v) for k, v in cfg.items()}
    io.write_json(cfg["out"] / "config.json", {"command": command, **record})


def _emit(cfg: dict, name: str, text: str) -> None:
    if cfg.get("out") is None:
        sys.stdout.write(text)
    else:
        path = io.write_text(cfg["out"] / name, text)
        print(f"wrote {path}")


# --------------------------------------------------------------------------
# graphs and schedules


def _scheme(cfg) -> Scheme:
    kind, size, grid = cfg["scheme"], int(cfg["size"]), tuple(int(n) for n in cfg["grid"])
    if kind == TORIC:
        return Scheme.toric(size)
    if kind == "trivial":
        return Scheme.trivial(*grid)
    return Scheme(kind, size, grid)


def _graph(cfg, scheme: Scheme | None = None):
    """Graph from explicit flags, or the natural graph for ``scheme``."""
    dims, boundary, blocks = cfg["dims"], cfg["boundary"], cfg["blocks"]
    if scheme is not None:
        sx, sy = (scheme.size, scheme.size) if scheme.kind == TORIC else scheme.slice_shape()
        if dims is None:
            dims = (sx, sy, 2 * scheme.size if scheme.kind == LAYERED else 4)
        if boundary is None:
            boundary = [SHIFTED, SHIFTED, OPEN] if scheme.kind == TORIC else [PERIODIC, PERIODIC, OPEN]
        if blocks is None:
            blocks = scheme.size if scheme.kind == LAYERED else 1
    if dims is None:
        raise UsageError("--dims is required")
    boundary = boundary or [PERIODIC]
    if len(boundary) not in (1, 3):
        raise UsageError("--boundary takes one flag or three")
    boundary = boundary[0] if len(boundary) == 1 else tuple(boundary)
    return build_cubic(tuple(dims), boundary, blocks=blocks or 1)


def cmd_build_graph(cfg) -> int:
    graph = _graph(cfg)
    _emit(cfg, "graph.json", io.dumps(graph.to_dict(), indent=None))
    log.info("%d vertices, %d edges, %d half-edges",
             graph.n_vertices, len(graph.edges), len(graph.half_edges))
    return EXIT_OK


def cmd_schedule(cfg) -> int:
    scheme = _scheme(cfg)
    graph = _graph(cfg, scheme)
    schedule = assign_coordinates(graph, scheme)
    classes = {}
    for edge in graph.edges:
        key = f"{edge.direction} {classify_fusion(schedule, edge)}"
        classes[key] = classes.get(key, 0) + 1
    doc = {
        "schedule": schedule.to_dict(),
        "fusion_classes": dict(sorted(classes.items())),
        "delay_requirements": {str(p): n for p, n in delay_requirements(schedule, graph).items()},
        "interleaving_ratio": str(interleaving_ratio(scheme)),
    }
    _emit(cfg, "schedule.json", io.dumps(doc, indent=None))
    return EXIT_OK


def cmd_validate_netlist(cfg) -> int:
    scheme = _scheme(cfg)
    graph = _graph(cfg, scheme)
    schedule = assign_coordinates(graph, scheme)
    netlist = build_netlist(scheme)
    for item in cfg["mutate"] or []:
        name, _, length = item.partition("=")
        try:
            netlist = netlist.with_delay(name, int(length))
        except (KeyError, ValueError) as exc:
            raise UsageError(f"bad --mutate {item!r}: {exc}") from exc
    report = validate(netlist, schedule, graph)
    _emit(cfg, "validation.json", io.dumps({"netlist": netlist.to_dict(), "report": report.to_dict()}))
    print(f"{len(report)} violations over {report.checked_edges} fusions", file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_INVALID


# --------------------------------------------------------------------------
# noise


def cmd_probe_noise(cfg) -> int:
    p_clock = per_bin_loss(float(cfg["db_per_km"]), float(cfg["m_per_bin"]))
    params = NoiseParams(float(cfg["p_baseline"]), p_clock)
    rows = noise_table(params, [int(n) for n in cfg["bins"]])
    lines = [f"# p_clock={p_clock:.6e}", "N,delay_loss_percent,qubit_loss,p0,p_enc"]
    lines += [f"{r['N']},{100 * r['delay_loss']:.4f},{r['qubit_loss']:.10g},"
              f"{r['p0']:.10g},{r['p_enc']:.10g}" for r in rows]
    _emit(cfg, "noise.csv", "\n".join(lines) + "\n")
    return EXIT_OK


# --------------------------------------------------------------------------
# sweeps


def grid_start(L: int) -> float:
    """First grid point for rastering length L.

    Interpolated between tabulated lengths; beyond the last one the final
    slope is extended, floored at 0.2%.
    """
    known = sorted(GRID_START)
    starts = [GRID_START[k] for k in known]
    if L <= known[-1]:
        return float(np.interp(L, known, starts))
    slope = (starts[-1] - starts[-2]) / (known[-1] - known[-2])
    return max(0.002, round(starts[-1] + slope * (L - known[-1]), 4))


def _spec(cfg, L: int) -> experiment.SweepSpec:
    start = cfg["p_start"] if cfg["p_start"] is not None else grid_start(L)
    step = float(cfg["p_step"])
    stop = cfg["p_stop"] if cfg["p_stop"] is not None else start + (GRID_POINTS - 1) * step
    if step <= 0 or stop < start:
        raise ValueError("grid needs p_step > 0 and p_stop >= p_start")
    return experiment.SweepSpec.grid(
        int(L), cfg["distances"], float(start), float(stop), step, int(cfg["trials"]),
        p_clock=float(cfg["p_clock"]), seed=int(cfg["seed"]), n_boot=int(cfg["n_boot"]),
        correlated=bool(cfg["correlated"]))


def _summary(result: experiment.SweepResult) -> dict:
    th = result.threshold
    return {"spec": result.spec.to_dict(), "threshold": th.to_dict() if th else None,
            "errors": result.errors}


def _threshold_line(L, th) -> str:
    if th is None:
        return f"L={L}: no threshold"
    err = f" +/- {100 * th.stderr:.3f}" if th.stderr is not None else ""
    return f"L={L}: threshold {100 * th.threshold:.3f}%{err} ({th.method}, {len(th.crossings)} pairs)"


def cmd_run_sweep(cfg) -> int:
    spec = _spec(cfg, cfg["L"])
    result = experiment.run_sweep(spec, workers=int(cfg["workers"]))
    csv = experiment.csv_text(result.points)
    if cfg["out"] is None:
        sys.stdout.write(csv)
    else:
        io.write_text(cfg["out"] / "points.csv", csv)
        io.write_json(cfg["out"] / "threshold.json", _summary(result))
    print(_threshold_line(spec.L, result.threshold), file=sys.stderr)
    for msg in result.errors:
        print(msg, file=sys.stderr)
    return EXIT_OK if result.threshold is not None else EXIT_RUNTIME


def cmd_fit_threshold(cfg) -> int:
    if cfg["csv"] is None:
        raise UsageError("--csv is required")
    try:
        points = experiment.read_csv(Path(cfg["csv"]).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {cfg['csv']}: {exc}") from exc
    Ls = sorted({pt.L for pt in points})
    if len(Ls) != 1:
        raise ValueError(f"CSV must hold a single rastering length, found {Ls}")
    if cfg["interpolation"]:
        th = fitting.interpolation_threshold(experiment.points_by_distance(points), L=Ls[0])
    else:
        th = experiment.threshold_from_points(points, n_boot=int(cfg["n_boot"]),
                                              seed=int(cfg["seed"]), L=Ls[0])
    _emit(cfg, "threshold.json", io.dumps(th.to_dict()))
    print(_threshold_line(Ls[0], th), file=sys.stderr)
    return EXIT_OK


def cmd_reproduce_table2(cfg) -> int:
    rows, ok = [], True
    header = "L,L2,delay_loss_percent,reference_percent,threshold_percent,stderr_percent,diff_pp"
    for L in cfg["Ls"]:
        spec = _spec(cfg, L)
        result = experiment.run_sweep(spec, workers=int(cfg["workers"]))
        th = result.threshold
        ok &= th is not None
        ref = REFERENCE_THRESHOLDS.get(L)
        loss = 1 - (1 - spec.p_clock) ** (L * L)
        value = th.threshold if th else float("nan")
        stderr = th.stderr if th and th.stderr is not None else float("nan")
        diff = 100 * (value - ref) if ref is not None else float("nan")
        rows.append(f"{L},{L * L},{100 * loss:.4f},{'' if ref is None else f'{100 * ref:.1f}'},"
                    f"{100 * value:.3f},{100 * stderr:.3f},{diff:+.3f}")
        print(_threshold_line(L, th), file=sys.stderr)
        if cfg["out"] is not None:
            io.write_text(cfg["out"] / f"points_L{L}.csv", experiment.csv_text(result.points))
            io.write_json(cfg["out"] / f"threshold_L{L}.json", _summary(result))
    _emit(cfg, "comparison.csv", "\n".join([header] + rows) + "\n")
    return EXIT_OK if ok else EXIT_RUNTIME


COMMANDS = {
    "build-graph": cmd_build_graph,
    "schedule": cmd_schedule,
    "validate-netlist": cmd_validate_netlist,
    "probe-noise": cmd_probe_noise,
    "run-sweep": cmd_run_sweep,
    "fit-threshold": cmd_fit_threshold,
    "reproduce-table2": cmd_reproduce_table2,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(f"choose a command: {', '.join(COMMANDS)}")
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(message)s")
        cfg = resolve(args)
        _archive(cfg, args.command)
        return COMMANDS[args.command](cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, KeyError) as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (fitting.FitError, fitting.ThresholdError, DecodeError, OSError, RuntimeError) as exc:
        print(f"runtime failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
