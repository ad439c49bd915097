"""Run experiments and write their data files, metadata and manifest.

Analyses run in a fixed order: classification first (so the prediction is on
record before any numerics), then curves and region rasters, the finite-volume
solver, wave identification on its output, and finally the delta-shock ODE.
Every file is written from values alone, so identical experiments give identical
bytes.
"""

from __future__ import annotations

import hashlib
import json
import math
import platform
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy

from .. import __version__
from ..deltashock import (
    ComplexSpeedError, DeltaBreakdown, DeltaError, DeltaProblem, explicit_discrepancy, initial_speed, integrate,
    oracle_wdelta, overcompressive, residual_bound, rh_deficit_residual,
)
from ..llf import RunResult, Snapshot, SolverAbort, detect_delta, run
from ..model import FlowCase, RiemannProblem
from ..regions import (
    R2_LAG, asymptotic_region, case_of, classify, crossing_times, raster_csv, region_raster,
)
from ..wavecurves import CurveKind, curve_w, r2_w_closed
from ..waveid import classify_profile, middle_state_error, shock_speed_check
from .config import Experiment, dump

CURVE_KINDS = (CurveKind.S1, CurveKind.C2, CurveKind.SDelta, CurveKind.SOver, CurveKind.JBound,
               CurveKind.R2Approx)


@dataclass
class Manifest:
    name: str
    out_dir: str
    files: list[str] = field(default_factory=list)
    errors: list[dict] = field(default_factory=list)
    verdicts: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.errors

    @property
    def solver_aborted(self) -> bool:
        return any(e.get("kind") == "SolverAbort" for e in self.errors)

    def to_dict(self) -> dict:
        return {"name": self.name, "out_dir": self.out_dir, "files": list(self.files),
                "errors": list(self.errors), "verdicts": self.verdicts}


def _f(x):
    return repr(float(x))


def _clean(obj):
    """JSON-safe copy: numpy scalars to floats, non-finite floats to strings."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else repr(x)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _json(obj) -> str:
    return json.dumps(_clean(obj), indent=2, sort_keys=True) + "\n"


class _Writer:
    def __init__(self, root: Path, fmt: str, manifest: Manifest):
        self.root, self.fmt, self.manifest = root, fmt, manifest
        root.mkdir(parents=True, exist_ok=True)

    def text(self, name: str, content: str):
        path = self.root / name
        path.write_text(content)
        self.manifest.files.append(name)

    def table(self, stem: str, header: list[str], rows):
        if self.fmt == "json":
            data = {"columns": header, "rows": [[float(x) if not isinstance(x, str) else x
                                                  for x in r] for r in rows]}
            self.text(stem + ".json", _json(data))
        else:
            lines = [",".join(header)]
            lines += [",".join(x if isinstance(x, str) else _f(x) for x in r) for r in rows]
            self.text(stem + ".csv", "\n".join(lines) + "\n")


def _prim(snap: Snapshot, params):
    rho = snap.v * np.exp(params.k * snap.t)
    if params.case is FlowCase.ETA_EQ_K:
        u = snap.w + params.beta * snap.t
    else:
        u = (snap.w + params.c) * np.exp(params.a * snap.t) - params.c
    return rho, u


def _write_snapshots(wr: _Writer, res: RunResult, params):
    snaps = ([res.initial] if res.initial is not None else []) + list(res.snapshots)
    for i, s in enumerate(snaps):
        rho, u = _prim(s, params)
        rows = zip(res.x, s.v, s.w, rho, u)
        wr.table(f"snapshot_{i:02d}", ["x", "v", "w", "rho", "u"], rows)


def _solver_summary(res: RunResult) -> dict:
    cfl = (np.asarray(res.dt_history) * np.asarray(res.lambda_history) / res.config.dx
           if len(res.dt_history) else np.array([0.0]))
    out = {"n_steps": res.n_steps, "times": res.times.tolist(),
           "steps": [s.steps for s in res.snapshots], "max_v": np.asarray(res.delta_metric).tolist(),
           "max_cfl_number": float(cfl.max())}
    if len(res.snapshots) >= 3:
        is_delta, slope = detect_delta(res)
        out["delta_detected"] = is_delta
        out["delta_slope"] = slope
    return out


def _curves(wr, exp, left, params, verdicts):
    spec = exp.curves
    vs = np.linspace(spec.v_min, spec.v_max, spec.n)
    for i, t in enumerate(spec.times):
        rows = []
        for kind in CURVE_KINDS:
            if kind is CurveKind.R2Approx:
                ws = [r2_w_closed(left, v, t, R2_LAG * t, params) for v in vs]
            else:
                ws = curve_w(kind, left, vs, t, params)
            rows += [(kind.value, _f(t), v, w) for v, w in zip(vs, ws)]
        wr.table(f"curves_t{i:02d}", ["kind", "t", "v", "w"], rows)
    verdicts["curves"] = {"times": list(spec.times)}


def _regions(wr, exp, left, params, verdicts):
    spec = exp.regions
    rows = region_raster(left, spec.t, params, (spec.v_min, spec.v_max), (spec.w_min, spec.w_max),
                         spec.nv, spec.nw)
    if wr.fmt == "json":
        wr.table("regions", ["v", "w", "label"], rows)
    else:
        wr.text("regions.csv", raster_csv(rows))
    verdicts["regions"] = {"t": spec.t, "points": len(rows)}


def _delta(wr, exp, left, right, params, verdicts):
    prob = DeltaProblem.from_states(left, right, params)
    info: dict = {"branch": prob.branch.value}
    try:
        sp = initial_speed(prob, detail=True)
    except ComplexSpeedError as exc:
        # no real delta speed exists for these data: an outcome, not a failure
        info["initial_speed"] = None
        info["no_real_speed"] = str(exc)
        verdicts["delta"] = info
        return
    info["initial_speed"] = sp.value
    info["initial_speed_roots"] = list(sp.roots)
    info["pressureless_speed"] = sp.pressureless
    if sp.note:
        info["initial_speed_note"] = sp.note
    oc = overcompressive(left, right, sp.value, 0.0, params)
    info["overcompressive_t0"] = oc.status.value
    failure = None
    try:
        traj = integrate(prob, t_end=exp.delta_t_end)
    except DeltaBreakdown as exc:
        # keep what was integrated before the breakdown
        traj, failure = exc.partial, exc
        info["breakdown_t"] = exc.t_break
    if traj is not None and len(traj.times) >= 5:
        res = rh_deficit_residual(traj, prob)
        bound = residual_bound(traj)
        info["residual_max"] = float(np.max(np.abs(res)))
        info["residual_bound"] = bound
        info["residual_ok"] = bool(np.max(np.abs(res)) <= bound)
        wr.table("trajectory", ["t", "x", "w_delta", "u_delta", "omega1", "omega_bar",
                                "res1", "res2"],
                 zip(traj.times, traj.x, traj.w_delta, traj.u_delta, traj.omega1, traj.omega_bar,
                     res[:, 0], res[:, 1]))
    if prob.rho_l == prob.rho_r and not prob.zero_strength and traj is not None:
        ts = traj.times[1:]
        ref = np.array([oracle_wdelta(t, prob) for t in ts])
        info["oracle_max_rel"] = float(np.max(np.abs(traj.w_delta[1:] - ref) / np.maximum(np.abs(ref),
                                                                                         1e-300)))
        info["printed_formula"] = explicit_discrepancy(prob, ts[:: max(1, len(ts) // 50)])
    verdicts["delta"] = info
    if failure is not None:
        raise failure


def run_experiment(exp: Experiment, out_dir: str | Path | None = None) -> Manifest:
    """Execute ``exp`` and write everything below ``out_dir`` (default ``exp.out_dir``)."""
    root = Path(out_dir if out_dir is not None else exp.out_dir)
    man = Manifest(exp.name, str(root))
    wr = _Writer(root, exp.fmt, man)
    params = exp.params
    left, right = exp.states()
    prob = RiemannProblem(left, right, params)
    todo = exp.ordered_analyses()
    verdicts = man.verdicts
    result = None

    for name in todo:
        try:
            if name == "classify":
                lab, form = classify(left, right, 0.0, params)
                alab, aform = asymptotic_region(left, right, params)
                horizon = exp.regions.horizon
                events = crossing_times(left, right, params, horizon)
                verdicts["classify"] = {
                    "case": case_of(params).id, "label_t0": str(lab), "form_t0": form.value,
                    "asymptotic_label": str(alab), "asymptotic_form": aform.value,
                    "horizon": horizon,
                    "crossings": [{"t_star": e.t_star, "from": str(e.from_label),
                                   "to": str(e.to_label), "boundary": e.boundary.value}
                                  for e in events],
                    "note": lab.note,
                }
            elif name == "curves":
                _curves(wr, exp, left, params, verdicts)
            elif name == "regions":
                _regions(wr, exp, left, params, verdicts)
            elif name == "solver":
                try:
                    result = run(prob, exp.solver)
                except SolverAbort as exc:
                    if exc.partial is not None:
                        _write_snapshots(wr, exc.partial, params)
                    raise
                _write_snapshots(wr, result, params)
                summ = _solver_summary(result)
                t_final = result.times[-1]
                lab, form = classify(left, right, t_final, params)
                summ["label_final"] = str(lab)
                summ["form_final"] = form.value
                verdicts["solver"] = summ
            elif name == "waveid":
                if result is None:
                    raise RuntimeError("no solver result to identify")
                form = classify(left, right, result.times[-1], params)[1]
                rep = classify_profile(result, form, params)
                wr.text("waves.txt", rep.to_text())
                info = {"sequence": rep.sequence, "predicted": form.value, "match": rep.match,
                        "delta": rep.delta, "middle_state": rep.middle_state}
                if rep.middle_state is not None and "S1" in rep.sequence:
                    try:
                        info["middle_state_error"] = middle_state_error(result, prob, params, rep)
                    except ValueError as exc:
                        info["middle_state_error"] = {"unavailable": str(exc)}
                    try:
                        info["shock_speed"] = shock_speed_check(result, rep, params)
                    except ValueError as exc:
                        info["shock_speed"] = {"unavailable": str(exc)}
                verdicts["waveid"] = info
            elif name == "delta":
                _delta(wr, exp, left, right, params, verdicts)
        except Exception as exc:  # noqa: BLE001 - every failure is recorded, siblings go on
            man.errors.append({"analysis": name, "kind": type(exc).__name__, "message": str(exc)})
            if isinstance(exc, SolverAbort):
                man.errors[-1]["t"] = exc.t
            if not isinstance(exc, (SolverAbort, DeltaError, ValueError, RuntimeError)):
                raise

    meta = {
        "experiment": exp.to_dict(),
        "advisories": list(params.advisories),
        "states_transformed": {"left": [left.v, left.w], "right": [right.v, right.w]},
        "versions": {"vgcg": __version__, "numpy": np.__version__, "scipy": scipy.__version__,
                     "python": platform.python_version()},
        "verdicts": verdicts,
        "errors": man.errors,
    }
    wr.text("experiment.ini", dump(exp))
    wr.text("metadata.json", _json(meta))
    digests = {f: hashlib.sha256((root / f).read_bytes()).hexdigest() for f in man.files}
    man_doc = man.to_dict()
    man_doc["sha256"] = digests
    (root / "manifest.json").write_text(_json(man_doc))
    return man


def _run_one(args):
    exp, out_dir = args
    try:
        return run_experiment(exp, out_dir)
    except Exception as exc:  # noqa: BLE001 - isolate failures per experiment
        m = Manifest(exp.name, str(out_dir if out_dir is not None else exp.out_dir))
        m.errors.append({"analysis": "experiment", "kind": type(exc).__name__, "message": str(exc)})
        return m


def batch(experiments, parallelism: int = 1, out_dirs=None) -> list[Manifest]:
    """Run independent experiments, at most ``parallelism`` at once; results keep input order."""
    experiments = list(experiments)
    out_dirs = list(out_dirs) if out_dirs is not None else [None] * len(experiments)
    if len(out_dirs) != len(experiments):
        raise ValueError("out_dirs must match experiments")
    roots = [str(Path(d if d is not None else e.out_dir).resolve())
             for e, d in zip(experiments, out_dirs)]
    if len(set(roots)) != len(roots):
        raise ValueError("experiments in a batch need distinct output directories")
    jobs = list(zip(experiments, out_dirs))
    if parallelism <= 1 or len(jobs) <= 1:
        return [_run_one(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=parallelism) as pool:
        return list(pool.map(_run_one, jobs))
