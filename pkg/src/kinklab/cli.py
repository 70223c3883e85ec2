"""Batch front door: parse a config and/or flags, dispatch a scenario,
emit CSV artifacts plus a manifest.

All numeric CSV output uses 17 significant digits so determinism is
byte-testable.  Exit codes: 0 success, 2 validation, 3 numeric blow-up,
4 oracle failure.
"""

from __future__ import annotations

import argparse
import copy
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .averaging import (MODEL_PAIRS, ComparisonScenario,
                        compare_full_vs_averaged, fit_scaling_order)
from .config import (RunConfig, build_config, forcing_from_table,
                     gaussian_bump, load_config)
from .errors import (BlowUpError, ConfigurationError, KinklabError,
                     OracleFailure, TrackingError)
from .fields import FieldState, Grid1D
from .forcing import build_stack
from .integrate import IntegrationPlan, SnapshotRecorder, integrate
from .kinks import (KinkParams, audit_dsg_coefficients, dsg_kink, init_kink,
                    pi_kink, pi_kink_mass, residual_convergence,
                    static_kink_coefficients, track_kink)
from .models import AVG7, AVG9, AVG12, ModelSpec, energy

OUTPUT_ROOT_ENV = "KINKLAB_OUTPUT_ROOT"

TRACK_LEVELS = {AVG7: math.pi / 2.0, AVG9: math.pi / 2.0, AVG12: math.pi,
                "full1": math.pi / 2.0, "full8": math.pi / 2.0,
                "full10": math.pi, "avg13": math.pi, "full13": math.pi}


def fmt(x) -> str:
    return f"{float(x):.17g}"


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(c if isinstance(c, str) else fmt(c) for c in row)
                     + "\n")


class Manifest:
    """Collects every produced artifact with its scenario parameters."""

    def __init__(self, scenario, params):
        self.scenario = scenario
        self.params = ";".join(f"{k}={v}" for k, v in sorted(params.items()))
        self.rows = []

    def add(self, path):
        self.rows.append((path, self.scenario, self.params))

    def write(self, out_dir):
        path = os.path.join(out_dir, "manifest.csv")
        write_csv(path, ("file", "scenario", "params"), self.rows)
        return path


def _resolve_output_dir(explicit, default_name):
    if explicit:
        return explicit
    root = os.environ.get(OUTPUT_ROOT_ENV, ".")
    return os.path.join(root, default_name)


def _write_snapshots(out_dir, snapshots, grid, manifest, prefix=""):
    for snap in snapshots:
        name = f"{prefix}snap_{snap.t:.6f}.csv"
        path = os.path.join(out_dir, name)
        write_csv(path, ("x", "u", "p"),
                  zip(grid.x, snap.u, snap.p))
        manifest.add(os.path.relpath(path, out_dir))


# ---------------------------------------------------------------- delta

def cmd_delta(args):
    if args.config:
        cfg = load_config(args.config)
        if cfg.stack is None:
            raise ConfigurationError("delta scenario requires a [forcing] table")
        stack = cfg.stack
        out_dir = args.output_dir or cfg.output_dir
    else:
        tbl = {"kind": args.forcing, "amplitude": args.amplitude,
               "period": args.period}
        if args.a:
            tbl["a"] = [float(c) for c in args.a.split(",")]
        if args.b:
            tbl["b"] = [float(c) for c in args.b.split(",")]
        stack = build_stack(forcing_from_table(tbl))
        out_dir = args.output_dir

    print(f"delta,{fmt(stack.delta)}")
    for name, value in stack.check_report().items():
        print(f"check,{name},{fmt(value)}")

    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        manifest = Manifest("delta", {"period": stack.period,
                                      "delta": stack.delta})
        tau = np.linspace(0.0, stack.period, args.samples + 1)
        path = os.path.join(out_dir, "forcing.csv")
        write_csv(path, ("tau", "f", "f1", "f2"),
                  zip(tau, stack.f(tau), stack.f_minus1(tau),
                      stack.f_minus2(tau)))
        manifest.add("forcing.csv")
        manifest.write(out_dir)
    return 0


# ------------------------------------------------------------- simulate

def _running_speed(times, positions, i):
    """Least-squares slope over the trailing half of the first i+1 points."""
    if i < 1:
        return math.nan
    tail = min((i + 1) // 2, i - 1)
    return float(np.polyfit(times[tail:i + 1], positions[tail:i + 1], 1)[0])


def run_simulate(cfg: RunConfig, out_dir):
    """Execute a validated simulate config; returns the manifest path."""
    model, grid, plan = cfg.model, cfg.grid, cfg.plan
    params = {"variant": model.variant, "t_end": plan.t_end, "dt": plan.dt,
              "scheme": plan.scheme, "n": grid.n}
    manifest = Manifest("simulate", params)
    os.makedirs(out_dir, exist_ok=True)

    recorder = SnapshotRecorder()
    blowup = None
    if plan.t_end == 0:
        recorder(cfg.initial)  # nothing to integrate; keep the initial snapshot
    else:
        try:
            integrate(cfg.initial, model, grid, plan, observers=(recorder,))
        except BlowUpError as e:
            blowup = e  # keep the partial record

    _write_snapshots(out_dir, recorder.snapshots, grid, manifest)

    initial_kind = cfg.raw.get("initial", {}).get("kind", "vacuum")
    level = TRACK_LEVELS.get(model.variant)
    track = None
    if initial_kind == "kink" and level is not None and len(recorder.snapshots) >= 2:
        try:
            track = track_kink(recorder.snapshots, grid, level)
        except TrackingError:
            track = None

    rows = []
    for i, snap in enumerate(recorder.snapshots):
        e = energy(snap, model, grid)
        if track is not None:
            kx = track.positions[i]
            c_est = _running_speed(track.times, track.positions, i)
        else:
            kx = c_est = math.nan
        rows.append((snap.t, e, kx, c_est))
    path = os.path.join(out_dir, "records.csv")
    write_csv(path, ("t", "energy", "kink_x", "kink_c_est"), rows)
    manifest.add("records.csv")
    manifest_path = manifest.write(out_dir)
    if blowup is not None:
        raise blowup
    return manifest_path


def cmd_simulate(args):
    cfg = load_config(args.config)
    out_dir = _resolve_output_dir(args.output_dir or cfg.output_dir, "simulate_run")
    run_simulate(cfg, out_dir)
    return 0


# -------------------------------------------------------------- compare

def _default_compare_initial(pair, eps, stack, grid, c):
    """Kink data for the strongly driven pi-kink pair, a smooth localized
    bump for the others (whose averaged kinks are impractically wide or
    epsilon-dependent)."""
    if pair == "full8":
        params = KinkParams(c=c, Delta=stack.delta)
        return init_kink(grid, params, AVG9)
    return gaussian_bump(grid, amplitude=0.5, width=2.0)


def cmd_compare(args):
    full_variant = args.pair.split("-")[0]
    if full_variant not in MODEL_PAIRS:
        raise ConfigurationError(
            f"unknown pair {args.pair!r}; valid: "
            + ", ".join(f"{k}-{v}" for k, v in MODEL_PAIRS.items()))
    eps_values = [float(e) for e in args.eps.split(",")]
    if not eps_values or any(e <= 0 for e in eps_values):
        raise ConfigurationError("--eps needs positive comma-separated values")
    stack = build_stack(forcing_from_table(
        {"kind": args.forcing, "amplitude": args.amplitude,
         "period": args.period}))

    if args.half_width is not None:
        half_width = args.half_width
    elif full_variant == "full8":
        half_width = 40.0 / max(1.0, math.sqrt(stack.delta))
    else:
        half_width = 20.0
    n = int(round(2.0 * half_width / args.dx)) + 1
    grid = Grid1D(-half_width, half_width, n)

    out_dir = _resolve_output_dir(args.output_dir, f"compare_{args.pair}")
    os.makedirs(out_dir, exist_ok=True)
    manifest = Manifest("compare", {
        "pair": args.pair, "forcing": args.forcing, "prep": args.prep,
        "t_end": args.t_end, "dx": args.dx, "eps": args.eps})

    records = []
    for eps in eps_values:
        scenario = ComparisonScenario(
            full_variant=full_variant, epsilon=eps, stack=stack, grid=grid,
            initial=_default_compare_initial(full_variant, eps, stack, grid,
                                             args.c),
            t_end=args.t_end, prep=args.prep, oversample=args.oversample,
            snapshot_stride=args.snapshot_stride)
        rec = compare_full_vs_averaged(scenario)
        records.append(rec)
        run_dir = os.path.join(out_dir, f"eps_{eps:g}")
        os.makedirs(os.path.join(run_dir, "full"), exist_ok=True)
        os.makedirs(os.path.join(run_dir, "avg"), exist_ok=True)
        _write_snapshots(os.path.join(run_dir, "full"), rec.full_snapshots,
                         grid, manifest)
        _write_snapshots(os.path.join(run_dir, "avg"), rec.avg_snapshots,
                         grid, manifest)
        err_path = os.path.join(run_dir, "errors.csv")
        write_csv(err_path, ("t", "sup_error"), zip(rec.times, rec.errors))
        manifest.add(os.path.relpath(err_path, out_dir))

    order = fit_scaling_order([(r.epsilon, r.error_tend) for r in records]) \
        if len(records) >= 2 else math.nan
    path = os.path.join(out_dir, "scaling.csv")
    write_csv(path, ("eps", "error_tend", "order_fit"),
              [(r.epsilon, r.error_tend, order) for r in records])
    manifest.add("scaling.csv")
    manifest.write(out_dir)
    for r in records:
        print(f"eps,{fmt(r.epsilon)},error_tend,{fmt(r.error_tend)}")
    print(f"order_fit,{fmt(order)}")
    return 0


# --------------------------------------------------------- kink-residual

def cmd_kink_residual(args):
    variant = args.model
    if variant not in (AVG7, AVG9, AVG12):
        raise ConfigurationError(
            f"kink-residual supports avg7, avg9, avg12; got {variant!r}")
    model = ModelSpec(variant, epsilon=args.epsilon, delta=args.delta)
    params = KinkParams(c=args.c, Delta=args.delta, epsilon=args.epsilon)

    audit_lines = []
    if variant == AVG12:
        a, b = static_kink_coefficients(args.delta)
        params = KinkParams(c=args.c, Delta=args.delta, dsg_a=a, dsg_b=b)
        solution = lambda x, t: dsg_kink(x, t, params)
        audit = audit_dsg_coefficients(args.delta)
        for tag in ("printed", "oracle"):
            verdict = "PASS" if audit[f"{tag}_pass"] else "FAIL"
            audit_lines.append(
                f"audit,{tag},{fmt(audit[tag + '_a'])},"
                f"{fmt(audit[tag + '_b'])},{fmt(audit[tag + '_residual'])},"
                f"{verdict}")
        m = b
    else:
        solution = lambda x, t: pi_kink(x, t, params, variant)
        m = pi_kink_mass(params, variant)

    dxs = [args.dx / 2**k for k in range(args.levels)]
    half_width = min(40.0 / m, 400.0)
    rows = residual_convergence(model, solution, dxs, half_width,
                                t_sample=args.t_sample)

    print("dx,residual,order")
    for dx, r, order in rows:
        print(f"{fmt(dx)},{fmt(r)},{fmt(order)}")
    for line in audit_lines:
        print(line)

    if args.output_dir:
        os.makedirs(args.output_dir, exist_ok=True)
        manifest = Manifest("kink-residual", {
            "model": variant, "delta": args.delta, "c": args.c,
            "dx": args.dx})
        path = os.path.join(args.output_dir, "residuals.csv")
        write_csv(path, ("dx", "residual", "order"), rows)
        manifest.add("residuals.csv")
        if audit_lines:
            apath = os.path.join(args.output_dir, "dsg_audit.csv")
            with open(apath, "w", newline="") as fh:
                fh.write("audit,pair,a,b,residual,verdict\n")
                for line in audit_lines:
                    fh.write(line + "\n")
            manifest.add("dsg_audit.csv")
        manifest.write(args.output_dir)
    return 0


# ---------------------------------------------------------------- sweep

def _set_dotted(raw, dotted, value):
    keys = dotted.split(".")
    node = raw
    for k in keys[:-1]:
        node = node.setdefault(k, {})
    node[keys[-1]] = value


def cmd_sweep(args):
    cfg = load_config(args.config)
    sweep = cfg.raw.get("sweep")
    if not sweep or "parameter" not in sweep or "values" not in sweep:
        raise ConfigurationError(
            "sweep scenario needs a [sweep] table with parameter and values")
    parameter, values = sweep["parameter"], sweep["values"]

    # validate every run up front (fail fast, before any output exists)
    runs = []
    for v in values:
        raw = copy.deepcopy(cfg.raw)
        raw["scenario"] = "simulate"
        raw.pop("sweep", None)
        _set_dotted(raw, parameter, v)
        runs.append((v, build_config(raw)))

    out_dir = _resolve_output_dir(args.output_dir or cfg.output_dir, "sweep_run")
    os.makedirs(out_dir, exist_ok=True)
    manifest = Manifest("sweep", {"parameter": parameter,
                                  "values": ",".join(str(v) for v in values)})

    def one(item):
        v, run_cfg = item
        sub = os.path.join(out_dir, f"run_{parameter.replace('.', '_')}_{v:g}")
        run_simulate(run_cfg, sub)
        return os.path.relpath(os.path.join(sub, "manifest.csv"), out_dir)

    with ThreadPoolExecutor(max_workers=args.jobs) as pool:
        for sub_manifest in pool.map(one, runs):
            manifest.add(sub_manifest)
    manifest.write(out_dir)
    return 0


# ----------------------------------------------------------------- main

def build_parser():
    parser = argparse.ArgumentParser(
        prog="kinklab",
        description="Numerical laboratory for parametrically driven "
                    "sine-Gordon dynamics and their averaged counterparts")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("delta", help="forcing stack statistics and CSV dump")
    p.add_argument("--config")
    p.add_argument("--forcing", default="cosine",
                   choices=("cosine", "square", "series"))
    p.add_argument("--amplitude", type=float, default=1.0)
    p.add_argument("--period", type=float, default=2.0 * math.pi)
    p.add_argument("--a", help="comma-separated cosine coefficients")
    p.add_argument("--b", help="comma-separated sine coefficients")
    p.add_argument("--samples", type=int, default=512)
    p.add_argument("--output-dir")
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("simulate", help="integrate one model from a config")
    p.add_argument("--config", required=True)
    p.add_argument("--output-dir")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="full-vs-averaged epsilon sweep")
    p.add_argument("--pair", required=True,
                   help="full1-avg7 | full8-avg9 | full10-avg12 | full13-avg13")
    p.add_argument("--forcing", default="cosine",
                   choices=("cosine", "square"))
    p.add_argument("--amplitude", type=float, default=1.0)
    p.add_argument("--period", type=float, default=2.0 * math.pi)
    p.add_argument("--eps", required=True,
                   help="comma-separated epsilon values")
    p.add_argument("--prep", default="raw", choices=("raw", "transform"))
    p.add_argument("--t-end", type=float, default=5.0)
    p.add_argument("--dx", type=float, default=0.1)
    p.add_argument("--c", type=float, default=0.0,
                   help="kink velocity for kink-initialized pairs")
    p.add_argument("--half-width", type=float)
    p.add_argument("--oversample", type=int, default=64)
    p.add_argument("--snapshot-stride", type=int, default=200)
    p.add_argument("--output-dir")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("kink-residual",
                       help="convergence table of the analytic-kink residual")
    p.add_argument("--model", required=True)
    p.add_argument("--delta", type=float, default=1.0)
    p.add_argument("--c", type=float, default=0.0)
    p.add_argument("--dx", type=float, default=0.1)
    p.add_argument("--levels", type=int, default=3)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--t-sample", type=float, default=0.0)
    p.add_argument("--output-dir")
    p.set_defaults(func=cmd_kink_residual)

    p = sub.add_parser("sweep", help="fan out simulate runs over a parameter")
    p.add_argument("--config", required=True)
    p.add_argument("--jobs", type=int, default=2)
    p.add_argument("--output-dir")
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except KinklabError as e:
        field = getattr(e, "field", args.command)
        code = {2: "validation", 3: "blowup", 4: "oracle"}.get(
            e.exit_code, "error")
        print(f"{code},{field},{e}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
