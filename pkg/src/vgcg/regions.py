"""Region classification of a right state relative to a left state.

The (v, w) plane around a left state is cut by the curves of :mod:`wavecurves`
into labelled regions, each carrying a predicted solution form.  The curves move
with time, so a fixed right state can change region.

Decision table (``F`` is the flank where R2 sits: ``v < v_L`` when
``k (gamma+1) < 0``, ``v > v_L`` otherwise):

gamma < -1 (Cases 1 and 3)
    V     below S_o
    VIII  on F, between C2 and R2
    IX    between S_o and C2
    VI    above both C2 and S1
    VII   between C2 and S1 (below S1)

-1 < gamma < 0 (Cases 2 and 4)
    V     below S_delta
    II    on F, between C2 and R2
    I     above C2
    III   below C2, above S1 (v > v_L)
    IV    below C2 and S1, above S_delta
"""

from __future__ import annotations

import enum
import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .model import PhysParams, TransState
from .wavecurves import CurveKind, curve_w, r2_w, r2_w_closed

BOUNDARY_TOL = 1e-9
# R2 is drawn as the frozen C2 curve started at R2_LAG * t, so it follows C2 and
# shares its long-time limit.
R2_LAG = 0.5


class SolutionForm(enum.Enum):
    S1C2 = "S1C2"
    S1R2 = "S1R2"
    R2C2 = "R2C2"
    R2C2orC2R2 = "R2C2orC2R2"
    DeltaOC = "DeltaOC"
    DeltaCombo = "DeltaCombo"
    Constant = "Constant"
    Unknown = "Unknown"


@dataclass(frozen=True)
class RegionLabel:
    name: str
    boundary: CurveKind | None = None
    note: str = field(default="", compare=False)

    def __str__(self):
        if self.name == "OnBoundary":
            return f"OnBoundary({self.boundary.value})" if self.boundary else "OnBoundary"
        return self.name

    @property
    def on_boundary(self) -> bool:
        return self.name == "OnBoundary"


@dataclass(frozen=True)
class CaseInfo:
    id: int
    kg1_sign: int

    def __int__(self):
        return self.id


@dataclass(frozen=True)
class CrossingEvent:
    t_star: float
    from_label: RegionLabel
    to_label: RegionLabel
    boundary: CurveKind


_FORMS = {
    1: {"VI": SolutionForm.S1C2, "VII": SolutionForm.S1R2},
    3: {"VI": SolutionForm.S1R2, "VII": SolutionForm.S1C2},
}
_COMMON = {
    "I": SolutionForm.R2C2, "II": SolutionForm.R2C2orC2R2, "III": SolutionForm.S1C2,
    "IV": SolutionForm.S1C2, "V": SolutionForm.DeltaOC, "VIII": SolutionForm.R2C2orC2R2,
    "IX": SolutionForm.DeltaCombo,
}


def case_of(params: PhysParams) -> CaseInfo:
    g, k = params.gamma, params.k
    if g < -1:
        cid = 1 if k > 0 else 3
    else:
        cid = 4 if k > 0 else 2
    return CaseInfo(cid, 1 if params.kg1 > 0 else -1)


def solution_form(label: RegionLabel, case: int) -> SolutionForm:
    if label.name in ("VI", "VII"):
        return _FORMS[case][label.name]
    return _COMMON.get(label.name, SolutionForm.Unknown)


def _r2(left, v, t, params, exact=False):
    t0 = R2_LAG * t
    return r2_w(left, v, t, t0, params) if exact else r2_w_closed(left, v, t, t0, params)


def _label(name, case, note=""):
    if name == "VIII" and case == 1 and not note:
        note = "R2 first (numerical evidence)"
    return RegionLabel(name, note=note)


def boundary_values(left: TransState, v: float, t: float, params: PhysParams,
                    exact_r2: bool = True) -> dict[CurveKind, float]:
    """Ordinates at ``v`` of the curves that act as region boundaries there."""
    cid = case_of(params).id
    lower = CurveKind.SOver if cid in (1, 3) else CurveKind.SDelta
    out = {
        CurveKind.C2: curve_w(CurveKind.C2, left, v, t, params),
        lower: curve_w(lower, left, v, t, params),
    }
    on_flank = v < left.v if params.kg1 < 0 else v > left.v
    if on_flank:
        out[CurveKind.R2Approx] = _r2(left, v, t, params, exact_r2)
    # S1 only separates regions where it lies above C2 (Cases 1/3) or below it (Cases 2/4)
    if (cid in (1, 3) and v < left.v) or (cid in (2, 4) and v > left.v):
        out[CurveKind.S1] = left.w
    return out


def classify(left: TransState, right: TransState, t: float, params: PhysParams,
             tol: float = BOUNDARY_TOL, exact_r2: bool = True):
    """Region label and predicted solution form of ``right`` at time ``t``."""
    if left == right:
        return RegionLabel("OnBoundary"), SolutionForm.Constant
    cid = case_of(params).id
    v, w = right.v, right.w
    curves = boundary_values(left, v, t, params, exact_r2)
    for kind, cw in curves.items():
        if abs(w - cw) <= tol:
            return RegionLabel("OnBoundary", kind), SolutionForm.Unknown

    c2 = curves[CurveKind.C2]
    r2 = curves.get(CurveKind.R2Approx)
    in_band = r2 is not None and min(c2, r2) < w < max(c2, r2)
    if cid in (1, 3):
        if w < curves[CurveKind.SOver]:
            name = "V"
        elif in_band:
            name = "VIII"
        elif w < c2:
            name = "IX"
        elif w > left.w:
            name = "VI"
        else:
            name = "VII"
    else:
        if w < curves[CurveKind.SDelta]:
            name = "V"
        elif in_band:
            name = "II"
        elif w > c2:
            name = "I"
        elif v > left.v and w > left.w:
            name = "III"
        else:
            name = "IV"
    label = _label(name, cid)
    return label, solution_form(label, cid)


def asymptotic_region(left: TransState, right: TransState, params: PhysParams):
    """Limit of :func:`classify` as ``t -> infinity``."""
    if left == right:
        return RegionLabel("OnBoundary"), SolutionForm.Constant
    cid = case_of(params).id
    v, w = right.v, right.w
    if params.kg1 < 0:
        # every curve collapses onto w = w_L
        if w == left.w:
            return RegionLabel("OnBoundary", CurveKind.S1), SolutionForm.Unknown
        upper = "VI" if cid == 1 else "I"
        name = upper if w > left.w else "V"
    elif cid == 4:
        # S_delta drops to -inf; C2 rises to +inf for v > v_L and falls to -inf for v < v_L
        if v < left.v or (v == left.v and w > left.w):
            name = "I"
        elif w > left.w:
            name = "III"
        elif w < left.w:
            name = "IV"
        else:
            return RegionLabel("OnBoundary", CurveKind.S1), SolutionForm.Unknown
    else:
        if v >= left.v and not (v == left.v and w >= left.w):
            name = "IX"
        elif w > left.w:
            name = "VI"
        elif w < left.w:
            name = "VII"
        else:
            return RegionLabel("OnBoundary", CurveKind.S1), SolutionForm.Unknown
    label = _label(name, cid)
    return label, solution_form(label, cid)


def _boundary_fn(kind, left, right, params):
    v = right.v
    if kind is CurveKind.R2Approx:
        return lambda t: r2_w_closed(left, v, t, R2_LAG * t, params) - right.w
    return lambda t: curve_w(kind, left, v, t, params) - right.w


def crossing_times(left: TransState, right: TransState, params: PhysParams, horizon: float,
                   n_scan: int = 4000, xtol: float = 1e-12, eps: float = 1e-6) -> list[CrossingEvent]:
    """Times in ``(0, horizon]`` where ``right`` crosses a region boundary.

    Each candidate root of ``curve(t) - w_R`` is bracketed on a uniform scan and
    refined with Brent's method; it is kept only when the label changes across it.
    """
    if not horizon > 0:
        raise ValueError("horizon must be positive")
    if left == right:
        return []
    cid = case_of(params).id
    lower = CurveKind.SOver if cid in (1, 3) else CurveKind.SDelta
    kinds = [CurveKind.S1, CurveKind.C2, lower, CurveKind.R2Approx]
    ts = np.linspace(0.0, horizon, n_scan + 1)
    events = []
    for kind in kinds:
        f = _boundary_fn(kind, left, right, params)
        vals = np.array([f(t) for t in ts])
        roots = []
        for i in range(n_scan):
            if vals[i] * vals[i + 1] < 0:
                roots.append(optimize.brentq(f, ts[i], ts[i + 1], xtol=xtol, rtol=1e-15))
            elif vals[i + 1] == 0 and i + 2 <= n_scan and vals[i] * vals[i + 2] < 0:
                roots.append(ts[i + 1])
        for root in roots:
            before = classify(left, right, max(root - eps, 0.0), params)[0]
            after = classify(left, right, root + eps, params)[0]
            if before != after:
                events.append(CrossingEvent(float(root), before, after, kind))
    events.sort(key=lambda e: e.t_star)
    return events


def region_raster(left: TransState, t: float, params: PhysParams, v_range, w_range,
                  nv: int = 100, nw: int = 100) -> list[tuple[float, float, str]]:
    vs = np.linspace(v_range[0], v_range[1], nv)
    ws = np.linspace(w_range[0], w_range[1], nw)
    rows = []
    for v in vs:
        for w in ws:
            label, _ = classify(left, TransState(float(v), float(w)), t, params, exact_r2=False)
            rows.append((float(v), float(w), str(label)))
    return rows


def raster_csv(rows) -> str:
    buf = io.StringIO()
    buf.write("v,w,label\n")
    for v, w, lab in rows:
        buf.write(f"{v!r},{w!r},{lab}\n")
    return buf.getvalue()


def limit_margin(left: TransState, v: float, t: float, params: PhysParams) -> float:
    """Largest distance of a boundary curve at ``v`` from its t -> infinity limit ``w_L``."""
    vals = boundary_values(left, v, t, params, exact_r2=False)
    return max(abs(x - left.w) for x in vals.values()) if params.kg1 < 0 else math.inf
