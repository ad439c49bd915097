"""Wave identification on finite-volume runs.

Each snapshot is cut into plateaus and transition layers; the layers are told
apart by how their width grows with the step count.  Under the Lax-Friedrichs
scheme a shock keeps a fixed width, a contact spreads diffusively (width ~ n**0.5)
and a rarefaction fans out linearly (width ~ n).  The growth is measured between
the snapshot nearest half the total steps and the last one and rescaled to a
step ratio of exactly 2, so the fanning threshold sits between sqrt(2) and 2.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np

from .llf import RunResult, Snapshot, detect_delta
from .model import PhysParams, RiemannProblem, TransState
from .regions import SolutionForm
from .wavecurves import NoMiddleState, middle_state, shock1_speed


@dataclass(frozen=True)
class WaveIdConfig:
    plateau_tol: float = 1e-3
    fan_ratio: float = 1.5
    shock_width: int = 3
    min_plateau: int = 5
    split_fraction: float = 0.3
    mass_fraction: float = 0.9
    # a layer counts as S1 when its w jump is below this fraction of |w_R - w_L|
    s1_dw_fraction: float = 0.1
    # the growth reference is the first snapshot at or after half the steps whose
    # layer count matches the last one, with at least this step ratio to the last
    min_step_ratio: float = 1.25


@dataclass(frozen=True)
class Layer:
    lo: int
    hi: int
    center: float
    width: float
    spread: float
    dv: float
    dw: float
    gap: int = 0


@dataclass
class WaveReport:
    sequence: list[str]
    middle_state: tuple[float, float] | None
    match: bool | None
    diagnostics: list[dict] = field(default_factory=list)
    predicted: SolutionForm | None = None
    delta: bool = False

    def to_text(self) -> str:
        buf = io.StringIO()
        buf.write(f"sequence: {' '.join(self.sequence) if self.sequence else '(none)'}\n")
        buf.write(f"predicted: {self.predicted.value if self.predicted else 'n/a'}\n")
        buf.write(f"match: {self.match}\n")
        buf.write(f"delta: {self.delta}\n")
        if self.middle_state is not None:
            buf.write(f"middle_state: v={self.middle_state[0]!r} w={self.middle_state[1]!r}\n")
        for i, d in enumerate(self.diagnostics):
            items = ", ".join(f"{k}={v!r}" for k, v in d.items())
            buf.write(f"wave {i}: {items}\n")
        return buf.getvalue()


def plateaus(v: np.ndarray, w: np.ndarray, tol: float = 1e-3, min_len: int = 5):
    """Maximal runs of cells within ``tol`` (relative) of the run's first cell."""
    runs = []
    n = len(v)
    i = 0
    while i < n:
        j = i + 1
        while j < n and abs(v[j] - v[i]) <= tol * abs(v[i]) and abs(w[j] - w[i]) <= tol * (1 + abs(w[i])):
            j += 1
        if j - i >= min_len:
            runs.append((i, j))
        i = j
    return runs


def _activity(v, w, lo, hi, sv, sw):
    return np.abs(np.diff(v[lo - 1:hi + 1])) / sv + np.abs(np.diff(w[lo - 1:hi + 1])) / sw


def _split(act, frac):
    """Split points at interior minima of ``act`` that are deep relative to both neighbouring peaks."""
    cuts = []
    n = len(act)
    if n < 3:
        return cuts
    # smooth a little so a single noisy cell does not split a layer
    k = np.array([0.25, 0.5, 0.25])
    s = np.convolve(act, k, mode="same")
    peak_l = np.maximum.accumulate(s)
    peak_r = np.maximum.accumulate(s[::-1])[::-1]
    i = 1
    while i < n - 1:
        if s[i] <= s[i - 1] and s[i] <= s[i + 1] and s[i] < frac * min(peak_l[i], peak_r[i]):
            j = i
            while j + 1 < n - 1 and s[j + 1] <= s[j]:
                j += 1
            cut = int(np.argmin(s[i:j + 1])) + i
            cuts.append(cut)
            # reset the left peak so the next split compares against the new hump
            peak_l[cut:] = np.maximum.accumulate(s[cut:])
            i = j + 1
        else:
            i += 1
    return cuts


def layers(snap: Snapshot, x: np.ndarray, cfg: WaveIdConfig) -> tuple[list[Layer], list[tuple[int, int]]]:
    v, w = snap.v, snap.w
    runs = plateaus(v, w, cfg.plateau_tol, cfg.min_plateau)
    sv = max(np.ptp(v), 1e-12)
    sw = max(np.ptp(w), 1e-12)
    out = []
    gaps = []
    prev_end = 0
    for a, b in runs + [(len(v), len(v))]:
        if a > prev_end:
            gaps.append((max(prev_end, 1), a))
        prev_end = b
    for gi, (lo, hi) in enumerate(gaps):
        if hi <= lo:
            continue
        # act[m] is the change between cells lo-1+m and lo+m
        act = _activity(v, w, lo, min(hi, len(v) - 1), sv, sw)
        cuts = _split(act, cfg.split_fraction)
        bounds = [0] + cuts + [len(act)]
        for s0, s1 in zip(bounds[:-1], bounds[1:]):
            seg = act[s0:s1]
            if seg.sum() <= 0:
                continue
            cm = np.cumsum(seg) / seg.sum()
            tail = (1 - cfg.mass_fraction) / 2
            i0 = int(np.searchsorted(cm, tail))
            i1 = int(np.searchsorted(cm, 1 - tail))
            c_lo, c_hi = lo - 1 + s0, lo - 1 + s1
            xs = x[c_lo + 1:c_hi + 1][:len(seg)] - 0.5 * (x[1] - x[0])
            wts = seg / seg.sum()
            center = float(np.sum(wts * xs))
            spread = float(np.sqrt(np.sum(wts * (xs - center) ** 2)))
            dx = x[1] - x[0]
            out.append(Layer(c_lo, c_hi, center, float((i1 - i0 + 1) * dx), spread,
                             float(v[c_hi] - v[c_lo]), float(w[c_hi] - w[c_lo]), gi))
    return out, runs


def _merge_gap(lays: list[Layer], gap: int, x: np.ndarray, snap: Snapshot) -> list[Layer]:
    """Replace the layers of one gap by a single layer spanning them."""
    members = [lay for lay in lays if lay.gap == gap]
    if len(members) < 2:
        return lays
    lo, hi = members[0].lo, members[-1].hi
    wts = np.array([lay.width for lay in members])
    center = float(np.average([lay.center for lay in members], weights=wts + 1e-300))
    merged = Layer(lo, hi, center, float(x[hi] - x[lo]), float(np.sqrt(np.sum(
        [lay.spread**2 for lay in members]))), float(snap.v[hi] - snap.v[lo]),
        float(snap.w[hi] - snap.w[lo]), gap)
    out, done = [], False
    for lay in lays:
        if lay.gap != gap:
            out.append(lay)
        elif not done:
            out.append(merged)
            done = True
    return out


def _gap_of(lays: list[Layer], j: int) -> int | None:
    for lay in lays:
        if lay.lo <= j <= lay.hi:
            return lay.gap
    return None


def _pick_half(result: RunResult) -> int:
    steps = np.array([s.steps for s in result.snapshots])
    target = steps[-1] / 2
    idx = int(np.argmin(np.abs(steps[:-1] - target)))
    return idx


def _reference(result: RunResult, n_last: int, cfg: WaveIdConfig, merge) -> tuple[int, list[Layer]]:
    snaps = result.snapshots
    i0 = _pick_half(result)
    first = None
    for i in range(i0, len(snaps) - 1):
        if snaps[-1].steps < cfg.min_step_ratio * max(snaps[i].steps, 1):
            break
        lay = merge(layers(snaps[i], result.x, cfg)[0], snaps[i])
        if first is None:
            first = (i, lay)
        if len(lay) == n_last:
            return i, lay
    if first is None:
        first = (i0, merge(layers(snaps[i0], result.x, cfg)[0], snaps[i0]))
    return first


def classify_profile(result: RunResult, predicted: SolutionForm | None = None,
                     params: PhysParams | None = None, cfg: WaveIdConfig | None = None) -> WaveReport:
    """Identify the waves of ``result`` and compare them with ``predicted``."""
    cfg = cfg or WaveIdConfig()
    if len(result.snapshots) < 3:
        raise ValueError("wave identification needs at least 3 snapshots")
    prob = result.problem
    last = result.snapshots[-1]
    if prob.left == prob.right:
        return WaveReport([], None, predicted in (None, SolutionForm.Constant), [], predicted)

    is_delta, slope = detect_delta(result)

    def merge(lays, snap):
        # a delta shock is one overcompressive wave; its spike splits the activity in two
        if is_delta:
            g = _gap_of(lays, int(np.argmax(snap.v)))
            if g is not None:
                return _merge_gap(lays, g, result.x, snap)
        return lays

    L_last, runs = layers(last, result.x, cfg)
    L_last = merge(L_last, last)
    i_half, L_half = _reference(result, len(L_last), cfg, merge)
    half = result.snapshots[i_half]
    jv = int(np.argmax(last.v))
    if not L_last:
        return WaveReport(["Unknown"], None, False, [], predicted, is_delta)

    n_ratio = last.steps / max(half.steps, 1)
    dw_total = abs(prob.right.w - prob.left.w)
    flat_tol = max(cfg.s1_dw_fraction * dw_total, cfg.plateau_tol * (1 + abs(prob.left.w)))
    seq, diags = [], []
    for i, lay in enumerate(L_last):
        d = {"center": lay.center, "width": lay.width, "spread": lay.spread, "dv": lay.dv,
             "dw": lay.dw}
        growth = None
        if len(L_half) == len(L_last) and L_half[i].spread > 0 and n_ratio > 1:
            p = math.log(max(lay.spread, 1e-12) / L_half[i].spread) / math.log(n_ratio)
            growth = 2.0**p
            d["growth"] = growth
            dt = last.t - half.t
            if dt > 0:
                d["speed"] = (lay.center - L_half[i].center) / dt
        if is_delta and lay.lo <= jv <= lay.hi:
            tag = "delta"
        elif growth is not None and growth >= cfg.fan_ratio:
            tag = "R2"
        elif abs(lay.dw) <= flat_tol:
            tag = "S1"
        else:
            tag = "C2"
        d["tag"] = tag
        d["half_time"] = half.t
        d["last_time"] = last.t
        seq.append(tag)
        diags.append(d)

    mid = None
    inner = runs[1:-1] if len(runs) >= 3 and runs[0][0] == 0 and runs[-1][1] == len(last.v) else []
    if inner:
        a, b = max(inner, key=lambda r: r[1] - r[0])
        mid = (float(np.median(last.v[a:b])), float(np.median(last.w[a:b])))
    report = WaveReport(seq, mid, None, diags, predicted, is_delta)
    report.match = _match(seq, predicted)
    return report


def _match(seq, predicted):
    if predicted is None or predicted in (SolutionForm.DeltaCombo, SolutionForm.Unknown):
        return None
    want = {
        SolutionForm.S1C2: [["S1", "C2"]],
        SolutionForm.S1R2: [["S1", "R2"]],
        SolutionForm.R2C2: [["R2", "C2"]],
        SolutionForm.R2C2orC2R2: [["R2", "C2"], ["C2", "R2"], ["C2"], ["R2"]],
        SolutionForm.DeltaOC: [["delta"]],
        SolutionForm.Constant: [[]],
    }[predicted]
    return seq in want


def middle_state_error(result: RunResult, prob: RiemannProblem | None = None,
                       params: PhysParams | None = None, report: WaveReport | None = None) -> dict:
    """Relative error of the measured middle plateau against the analytic S1 + C2 middle state."""
    prob = prob or result.problem
    params = params or prob.params
    report = report or classify_profile(result, params=params)
    if report.middle_state is None:
        raise ValueError("no middle plateau detected")
    t = result.snapshots[-1].t
    try:
        ms = middle_state(prob.left, prob.right, t, params)
    except NoMiddleState as exc:
        raise ValueError(str(exc)) from exc
    vm, wm = report.middle_state
    ev = abs(vm - ms.v) / abs(ms.v)
    ew = abs(wm - ms.w) / max(abs(ms.w), 1e-300)
    return {"error": max(ev, ew), "v_error": ev, "w_error": ew, "analytic": (ms.v, ms.w),
            "measured": (vm, wm), "t": t}


def shock_speed_check(result: RunResult, report: WaveReport, params: PhysParams | None = None,
                      n_avg: int = 64) -> dict | None:
    """Measured S1 drift speed against the Rankine-Hugoniot speed averaged over the interval."""
    prob = result.problem
    params = params or prob.params
    for d in report.diagnostics:
        if d["tag"] == "S1" and "speed" in d:
            ts = np.linspace(d["half_time"], d["last_time"], n_avg)
            sig = [shock1_speed(prob.left, middle_state(prob.left, prob.right, t, params).v, t, params)
                   for t in ts]
            ref = float(np.trapezoid(sig, ts) / (ts[-1] - ts[0]))
            return {"measured": d["speed"], "analytic": ref,
                    "rel_error": abs(d["speed"] - ref) / abs(ref)}
    return None


def synthetic_result(prob: RiemannProblem, x: np.ndarray, states: list[TransState],
                     positions: list[np.ndarray], times: np.ndarray, widths: list[np.ndarray],
                     steps: np.ndarray, config=None) -> RunResult:
    """Build a RunResult from analytic states joined by tanh ramps (for tests)."""
    snaps = []
    for k, t in enumerate(times):
        v = np.full_like(x, states[0].v)
        w = np.full_like(x, states[0].w)
        for i in range(len(states) - 1):
            s0, s1 = states[i], states[i + 1]
            wid = widths[i][k]
            ramp = 0.5 * (1 + np.tanh((x - positions[i][k]) / max(wid, 1e-9)))
            v = v + (s1.v - s0.v) * ramp
            w = w + (s1.w - s0.w) * ramp
        snaps.append(Snapshot(float(t), v, w, int(steps[k])))
    metric = np.array([s.v.max() for s in snaps])
    return RunResult(x, snaps, np.array([]), np.array([]), metric, prob, config)


def growth_onset(result: RunResult, t_star: float) -> dict:
    """Compare the growth of ``max v`` per unit time before and after ``t_star``.

    Onset means the metric rises monotonically after ``t_star`` and faster than before it.
    """
    m = np.asarray(result.delta_metric, float)
    t = result.times
    if len(m) < 4:
        raise ValueError("growth onset needs at least 4 snapshots")
    rate = np.diff(m) / np.diff(t)
    pre = t[1:] <= t_star
    post = t[:-1] >= t_star
    if not pre.any() or not post.any():
        raise ValueError("t_star must fall strictly inside the run")
    pre_rate = float(np.mean(rate[pre]))
    post_rate = float(np.mean(rate[post]))
    monotone = bool(np.all(np.diff(m[np.r_[False, post]]) > 0)) if post.sum() > 1 else True
    return {"pre_rate": pre_rate, "post_rate": post_rate, "monotone_post": monotone,
            "onset": monotone and post_rate > pre_rate}
