"""Time-dependent curves through a left state in the (v, w) plane.

All curves are built from the pressure factor ``P(v, t) = A v**gamma e**(k t (gamma+1))``.
The curve geometry is the same for eta == k and eta != k; only the speeds differ.
"""

from __future__ import annotations

import enum
import io
import math

import numpy as np
from scipy import integrate, optimize

from .characteristics import eigen
from .model import FlowCase, PhysParams, PositivityError, TransState


class CurveKind(enum.Enum):
    S1 = "S1"
    C2 = "C2"
    SDelta = "SDelta"
    SOver = "SOver"
    JBound = "JBound"
    R2Approx = "R2Approx"


class NoMiddleState(ValueError):
    """The right state is not reachable through S1 followed by C2 at this time."""


def _P(v, t, params: PhysParams):
    return params.A * np.power(v, params.gamma) * np.exp(params.kg1 * t)


def curve_w(kind: CurveKind, left: TransState, v, t: float, params: PhysParams):
    """Ordinate of the curve ``kind`` through ``left`` at abscissa ``v`` (scalar or array)."""
    kind = CurveKind(kind)
    v = np.asarray(v, dtype=float)
    if np.any(v <= 0):
        raise PositivityError("curves are defined for v > 0 only")
    wl, vl, g = left.w, left.v, params.gamma
    if kind is CurveKind.S1:
        out = np.full_like(v, wl)
    elif kind is CurveKind.C2:
        out = wl + _P(v, t, params) - _P(vl, t, params)
    elif kind is CurveKind.SDelta:
        out = wl + _P(v, t, params)
    elif kind in (CurveKind.SOver, CurveKind.JBound):
        # the overcompressive cap and the J bound are the same curve lambda2(v, w) = lambda1(left)
        out = wl + _P(v, t, params) - (g + 1) * _P(vl, t, params)
    else:
        raise ValueError("use r2_w for the approximate 2-rarefaction curve")
    return out if out.ndim else float(out)


def r2_w(left: TransState, v: float, t: float, t0: float, params: PhysParams,
         rtol: float = 1e-10) -> float:
    """Approximate 2-rarefaction ordinate with ``v`` frozen inside the time integral.

    This is only a rough outline of the true R2 locus, which has no known closed form.
    """
    if v <= 0:
        raise PositivityError("v must be positive")
    if t < t0:
        raise ValueError("t must not precede the wave start time t0")
    A, g, kg1 = params.A, params.gamma, params.kg1
    integral, _ = integrate.quad(
        lambda s: v**g * A * kg1 * math.exp(kg1 * s), t0, t, epsabs=0.0, epsrel=rtol, limit=200)
    return left.w + _P(v, t, params) - _P(left.v, t0, params) - integral


def r2_w_closed(left: TransState, v: float, t: float, t0: float, params: PhysParams) -> float:
    """Closed form of :func:`r2_w`: the C2 curve frozen at the start time ``t0``."""
    return float(left.w + _P(v, t0, params) - _P(left.v, t0, params))


def _dq(vm: float, v: float, gamma: float) -> float:
    """Difference quotient of ``v**(gamma+1)`` with its limit near ``v == vm``."""
    if abs(v - vm) < 1e-12 * vm:
        return (gamma + 1) * vm**gamma
    return (v ** (gamma + 1) - vm ** (gamma + 1)) / (v - vm)


def shock1_speed(left: TransState, v: float, t: float, params: PhysParams) -> float:
    """Rankine-Hugoniot speed of the 1-shock from ``left`` to ``(v, left.w)``."""
    if v <= 0 or left.v <= 0:
        raise PositivityError("densities must be positive")
    E = math.exp(params.kg1 * t)
    dq = _dq(left.v, v, params.gamma)
    if params.case is FlowCase.ETA_EQ_K:
        return left.w + params.beta * t - params.A * E * dq
    c = params.c
    ea = math.exp(params.a * t)
    return (left.w + c) * ea - c - params.A * ea * E * dq


def lax_by_speeds(left: TransState, v: float, t: float, params: PhysParams) -> bool:
    """Lax test ``lambda1(R) < sigma1 < lambda1(L)`` evaluated from the speeds directly."""
    s = shock1_speed(left, v, t, params)
    l1L = eigen(left, t, params).lambda1
    l1R = eigen(TransState(v, left.w), t, params).lambda1
    return bool(l1R < s < l1L)


def contact_speed(state: TransState, t: float, params: PhysParams) -> float:
    return eigen(state, t, params).lambda2


def middle_state(left: TransState, right: TransState, t: float, params: PhysParams) -> TransState:
    """Intermediate state of an S1 + C2 solution: ``(v_M, w_L)`` with ``right`` on C2 through it."""
    A, g = params.A, params.gamma
    base = right.v**g + (left.w - right.w) * math.exp(-params.kg1 * t) / A
    if not base > 0:
        raise NoMiddleState(f"no middle state at t={t}: base {base!r} is not positive")
    return TransState(base ** (1.0 / g), left.w)


def middle_state_bisect(left: TransState, right: TransState, t: float, params: PhysParams,
                        xtol: float = 1e-14) -> float:
    """Root-finding oracle for ``v_M``: solve C2 through ``(v_M, w_L)`` hitting ``right``."""
    def f(vm):
        return curve_w(CurveKind.C2, TransState(vm, left.w), right.v, t, params) - right.w

    lo, hi = 1e-12, 1.0
    # f is monotone in vm; expand the upper end until the sign changes
    while f(hi) * f(lo) > 0 and hi < 1e12:
        hi *= 2.0
    return optimize.brentq(f, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=500)


def sample_curve(kind: CurveKind, left: TransState, t: float, v_grid, params: PhysParams,
                 t0: float = 0.0) -> np.ndarray:
    """Rows ``(v, w)`` of a curve on ``v_grid``."""
    v_grid = np.asarray(v_grid, dtype=float)
    if CurveKind(kind) is CurveKind.R2Approx:
        w = np.array([r2_w(left, v, t, t0, params) for v in v_grid])
    else:
        w = np.asarray(curve_w(kind, left, v_grid, t, params), dtype=float)
    return np.column_stack([v_grid, w])


def curve_csv(rows: np.ndarray) -> str:
    buf = io.StringIO()
    buf.write("v,w\n")
    for v, w in rows:
        buf.write(f"{float(v)!r},{float(w)!r}\n")
    return buf.getvalue()


__all__ = [
    "CurveKind", "NoMiddleState", "curve_w", "r2_w", "r2_w_closed", "shock1_speed",
    "lax_by_speeds", "contact_speed", "middle_state", "middle_state_bisect", "sample_curve",
    "curve_csv",
]
