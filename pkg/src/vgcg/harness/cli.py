"""Command-line entry point ``vgcg``.

Exit codes: 0 success, 1 invalid input, 2 solver abort.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from ..deltashock import (
    DeltaError, DeltaProblem, initial_speed, integrate, residual_bound, rh_deficit_residual,
    trajectory_csv,
)
from ..llf import SolverAbort, run
from ..model import ParameterError, PositivityError, RiemannProblem, validate_params
from ..regions import asymptotic_region, classify, crossing_times, raster_csv, region_raster
from ..wavecurves import CurveKind, curve_csv, sample_curve
from ..waveid import classify_profile
from . import presets
from .config import ConfigError, Experiment, dump, load
from .runner import batch, run_experiment

EXIT_OK, EXIT_INVALID, EXIT_ABORT = 0, 1, 2


def _floats(text: str, n: int, what: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"{what}: expected {n} comma-separated numbers") from None
    if len(vals) != n:
        raise argparse.ArgumentTypeError(f"{what}: expected {n} comma-separated numbers")
    return vals


def _pair(text):
    return _floats(text, 2, "state")


def _five(text):
    return _floats(text, 5, "params (A,gamma,k,eta,beta)")


def _resolve(source: str) -> Experiment:
    """A preset name or the path of an INI file."""
    if source in presets.CATALOG:
        return presets.preset(source)
    path = Path(source)
    if path.exists():
        return load(path)
    raise ConfigError(f"{source!r} is neither a preset nor a readable file; "
                      f"presets: {', '.join(presets.names())}")


def _experiment_from(args) -> Experiment:
    """Experiment selected by --preset/--config, optionally overridden by --params/--left/--right."""
    if getattr(args, "preset", None):
        exp = presets.preset(args.preset)
    elif getattr(args, "config", None):
        exp = load(args.config)
    else:
        if args.params is None or args.left is None:
            raise ConfigError("give --preset, --config or --params with --left")
        right = args.right if args.right is not None else args.left
        exp = Experiment("cli", validate_params(*args.params), tuple(args.left), tuple(right))
    kw = {}
    if getattr(args, "params", None) is not None and (args.preset or args.config):
        kw["params"] = validate_params(*args.params)
    if getattr(args, "left", None) is not None and (args.preset or args.config):
        kw["left"] = tuple(args.left)
    if getattr(args, "right", None) is not None and (args.preset or args.config):
        kw["right"] = tuple(args.right)
    return replace(exp, **kw) if kw else exp


def _grid_overrides(args) -> dict:
    return {"nx": args.nx, "x_min": args.x_min, "x_max": args.x_max, "cfl": args.cfl,
            "iterations": args.iterations, "steps_per_iteration": args.steps, "t_end": args.t_end}


def _emit(text: str, out: str | None):
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _as_json_rows(header, rows) -> str:
    return json.dumps({"columns": header, "rows": rows}, indent=2) + "\n"


# ---------------------------------------------------------------- subcommands

def cmd_run(args) -> int:
    exps = []
    for src in args.sources:
        exp = _resolve(src).with_overrides(**_grid_overrides(args))
        if args.format:
            exp = replace(exp, fmt=args.format)
        exps.append(exp)
    if args.out:
        dirs = [str(Path(args.out) / e.name) if len(exps) > 1 else args.out for e in exps]
    else:
        dirs = [e.out_dir for e in exps]
    mans = batch(exps, args.jobs, dirs)
    code = EXIT_OK
    for man in mans:
        status = "ok" if man.ok else "; ".join(f"{e['analysis']}: {e['message']}" for e in man.errors)
        print(f"{man.name}: {man.out_dir} ({len(man.files)} files) {status}")
        w = man.verdicts.get("waveid")
        if w:
            print(f"  waves {' '.join(w['sequence'])} predicted {w['predicted']} match {w['match']}")
        if man.solver_aborted:
            code = EXIT_ABORT
        elif not man.ok and code == EXIT_OK:
            code = EXIT_INVALID if any(e["analysis"] == "experiment" for e in man.errors) else code
    return code


def cmd_preset(args) -> int:
    if args.action == "list":
        for name in presets.names():
            print(f"{name:38s} {presets.CATALOG[name].description}")
        return EXIT_OK
    if not args.name:
        raise ConfigError("preset show needs a name")
    print(dump(presets.preset(args.name)), end="")
    return EXIT_OK


def cmd_curves(args) -> int:
    exp = _experiment_from(args)
    left = exp.states()[0]
    vs = np.linspace(args.v_min, args.v_max, args.n)
    kinds = [CurveKind(k) for k in args.kind] if args.kind else list(CurveKind)
    parts = []
    rows_json = []
    for kind in kinds:
        t0 = args.t0 if args.t0 is not None else 0.5 * args.t
        rows = sample_curve(kind, left, args.t, vs, exp.params, t0=t0)
        if args.format == "json":
            rows_json += [[kind.value, float(v), float(w)] for v, w in rows]
        else:
            body = curve_csv(rows).splitlines()
            parts.append("\n".join(["kind," + body[0]] + [f"{kind.value},{ln}" for ln in body[1:]]))
    if args.format == "json":
        _emit(_as_json_rows(["kind", "v", "w"], rows_json), args.out)
    else:
        first, *rest = parts
        text = first + "".join("\n" + "\n".join(p.splitlines()[1:]) for p in rest)
        _emit(text + "\n", args.out)
    return EXIT_OK


def cmd_regions(args) -> int:
    exp = _experiment_from(args)
    left, right = exp.states()
    if args.crossings is not None:
        events = crossing_times(left, right, exp.params, args.crossings)
        rows = [[e.t_star, str(e.from_label), str(e.to_label), e.boundary.value] for e in events]
        if args.format == "json":
            _emit(_as_json_rows(["t_star", "from", "to", "boundary"], rows), args.out)
        else:
            _emit("t_star,from,to,boundary\n"
                  + "".join(f"{r[0]!r},{r[1]},{r[2]},{r[3]}\n" for r in rows), args.out)
        return EXIT_OK
    rows = region_raster(left, args.t, exp.params, (args.v_min, args.v_max),
                         (args.w_min, args.w_max), args.nv, args.nw)
    if args.format == "json":
        _emit(_as_json_rows(["v", "w", "label"], [list(r) for r in rows]), args.out)
    else:
        _emit(raster_csv(rows), args.out)
    return EXIT_OK


def cmd_delta(args) -> int:
    exp = _experiment_from(args)
    left, right = exp.states()
    prob = DeltaProblem.from_states(left, right, exp.params)
    traj = integrate(prob, t_end=args.t_end)
    res = rh_deficit_residual(traj, prob)
    if args.format == "json":
        cols = ["t", "x", "w_delta", "u_delta", "omega1", "omega_bar", "res1", "res2"]
        data = np.column_stack([traj.times, traj.x, traj.w_delta, traj.u_delta, traj.omega1,
                                traj.omega_bar, res[:, 0], res[:, 1]]).tolist()
        _emit(_as_json_rows(cols, data), args.out)
    else:
        _emit(trajectory_csv(traj, res), args.out)
    bound = residual_bound(traj)
    print(f"initial speed {initial_speed(prob)!r}; max residual {float(np.abs(res).max())!r} "
          f"(bound {bound!r})", file=sys.stderr)
    return EXIT_OK


def cmd_classify(args) -> int:
    exp = _experiment_from(args)
    left, right = exp.states()
    out = {"case_label": {}, "asymptotic": None}
    for t in args.t:
        lab, form = classify(left, right, t, exp.params)
        out["case_label"][repr(t)] = {"label": str(lab), "form": form.value, "note": lab.note}
    alab, aform = asymptotic_region(left, right, exp.params)
    out["asymptotic"] = {"label": str(alab), "form": aform.value}
    if args.horizon:
        out["crossings"] = [{"t_star": e.t_star, "from": str(e.from_label), "to": str(e.to_label),
                             "boundary": e.boundary.value}
                            for e in crossing_times(left, right, exp.params, args.horizon)]
    if args.simulate:
        solver = exp.with_overrides(**_grid_overrides(args)).solver
        result = run(RiemannProblem(left, right, exp.params), solver)
        form = classify(left, right, result.times[-1], exp.params)[1]
        rep = classify_profile(result, form, exp.params)
        out["waves"] = {"sequence": rep.sequence, "predicted": form.value, "match": rep.match,
                        "t": float(result.times[-1])}
        if args.report:
            _emit(rep.to_text(), args.report)
    if args.format == "json":
        print(json.dumps(out, indent=2))
    else:
        for t, d in out["case_label"].items():
            print(f"t={t}: {d['label']} -> {d['form']}" + (f" ({d['note']})" if d["note"] else ""))
        print(f"t->inf: {out['asymptotic']['label']} -> {out['asymptotic']['form']}")
        for e in out.get("crossings", []):
            print(f"crossing at t*={e['t_star']!r}: {e['from']} -> {e['to']} via {e['boundary']}")
        if "waves" in out:
            w = out["waves"]
            print(f"solver t={w['t']!r}: waves {' '.join(w['sequence']) or '(none)'}; "
                  f"predicted {w['predicted']}; match {w['match']}")
    return EXIT_OK


# ---------------------------------------------------------------- parser

def _add_grid(p):
    g = p.add_argument_group("grid overrides")
    g.add_argument("--nx", type=int)
    g.add_argument("--x-min", type=float)
    g.add_argument("--x-max", type=float)
    g.add_argument("--cfl", type=float)
    g.add_argument("--iterations", type=int)
    g.add_argument("--steps", type=int, help="steps per iteration")
    g.add_argument("--t-end", type=float, help="advance a fixed physical time instead of step counts")


def _add_problem(p, need_right=True):
    g = p.add_argument_group("problem")
    g.add_argument("--preset")
    g.add_argument("--config")
    g.add_argument("--params", type=_five, help="A,gamma,k,eta,beta")
    g.add_argument("--left", type=_pair, help="v,w")
    if need_right:
        g.add_argument("--right", type=_pair, help="v,w")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="vgcg", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run experiments from presets or INI files")
    p.add_argument("sources", nargs="+", help="preset names or config paths")
    p.add_argument("--out", help="output directory (one subdirectory per experiment if several)")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--jobs", type=int, default=1, help="experiments run in parallel")
    _add_grid(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("preset", help="list or show presets")
    p.add_argument("action", choices=("list", "show"))
    p.add_argument("name", nargs="?")
    p.set_defaults(func=cmd_preset)

    p = sub.add_parser("curves", help="sample the wave curves through a left state")
    _add_problem(p, need_right=False)
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--t0", type=float, help="start time of the R2 approximation (default t/2)")
    p.add_argument("--kind", action="append", choices=[k.value for k in CurveKind])
    p.add_argument("--v-min", type=float, default=0.1)
    p.add_argument("--v-max", type=float, default=4.0)
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_curves, right=None)

    p = sub.add_parser("regions", help="region raster or boundary crossing times")
    _add_problem(p)
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--v-min", type=float, default=0.1)
    p.add_argument("--v-max", type=float, default=4.0)
    p.add_argument("--w-min", type=float, default=-20.0)
    p.add_argument("--w-max", type=float, default=20.0)
    p.add_argument("--nv", type=int, default=60)
    p.add_argument("--nw", type=int, default=60)
    p.add_argument("--crossings", type=float, metavar="HORIZON",
                   help="list region changes of the right state up to HORIZON instead")
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_regions)

    p = sub.add_parser("delta", help="integrate the delta-shock weight equations")
    _add_problem(p)
    p.add_argument("--t-end", type=float, default=2.0)
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("classify", help="region and predicted solution of a Riemann problem")
    _add_problem(p)
    p.add_argument("--t", type=float, action="append", help="query time (repeatable, default 0)")
    p.add_argument("--horizon", type=float, help="also list crossing times up to this time")
    p.add_argument("--simulate", action="store_true", help="run the solver and identify its waves")
    p.add_argument("--report", help="write the wave report here (with --simulate)")
    p.add_argument("--format", choices=("csv", "json"), default="csv",
                   help="json prints a structured result")
    _add_grid(p)
    p.set_defaults(func=cmd_classify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        # usage errors are invalid input; exit code 2 is reserved for solver aborts
        return EXIT_INVALID if exc.code else EXIT_OK
    if getattr(args, "t", None) is None and args.command == "classify":
        args.t = [0.0]
    try:
        return args.func(args)
    except BrokenPipeError:
        # output piped into a reader that closed early, e.g. head
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK
    except SolverAbort as exc:
        print(f"solver abort: {exc}", file=sys.stderr)
        return EXIT_ABORT
    except (ConfigError, ParameterError, PositivityError, KeyError, ValueError, DeltaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
