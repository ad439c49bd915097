"""Eigenstructure of the transformed systems.

The 1-field is genuinely nonlinear, the 2-field linearly degenerate.  Both
eigenvalues share the form ``base(w, t) - m * A v**gamma e**(k t (gamma+1))``
scaled by ``e**((eta-k) t)`` when eta != k, with ``m = gamma + 1`` for the
first field and ``m = 1`` for the second.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .model import FlowCase, PhysParams, PositivityError, TransState


@dataclass(frozen=True)
class EigenData:
    lambda1: float
    lambda2: float
    r1: tuple[float, float]
    r2: tuple[float, float]


def _check_v(v):
    if np.any(np.asarray(v) <= 0):
        raise PositivityError("eigenstructure needs v > 0")


def eigenvalues(v, w, t, params: PhysParams):
    """Array version of ``(lambda1, lambda2)``."""
    A, g = params.A, params.gamma
    P = A * v**g * np.exp(params.kg1 * t)
    if params.case is FlowCase.ETA_EQ_K:
        base = w + params.beta * t
        return base - (g + 1) * P, base - P
    c = params.c
    ea = np.exp(params.a * t)
    W = w + c
    return -c + (W - (g + 1) * P) * ea, -c + (W - P) * ea


def eigen(state: TransState, t: float, params: PhysParams) -> EigenData:
    _check_v(state.v)
    l1, l2 = eigenvalues(state.v, state.w, t, params)
    A, g = params.A, params.gamma
    r2w = A * g * state.v ** (g - 1) * np.exp(params.kg1 * t)
    return EigenData(float(l1), float(l2), (1.0, 0.0), (1.0, float(r2w)))


def _gn1_closed(v, t, params: PhysParams) -> float:
    A, g = params.A, params.gamma
    # e**((eta + k gamma) t) collapses to e**(k (gamma+1) t) when eta == k
    rate = params.kg1 + (params.a if params.case is FlowCase.ETA_NEQ_K else 0.0)
    return -A * g * (g + 1) * v ** (g - 1) * np.exp(rate * t)


def _directional(fn, v, w, dv, dw, h):
    return (fn(v + h * dv, w + h * dw) - fn(v - h * dv, w - h * dw)) / (2 * h)


@dataclass(frozen=True)
class FieldCharacter:
    gn1: float
    ld2: float
    gn1_fd: float
    ld2_fd: float

    def __iter__(self):
        # unpacks as the pair (gn1, ld2) of closed-form values
        return iter((self.gn1, self.ld2))


def field_character(state: TransState, t: float, params: PhysParams) -> FieldCharacter:
    """``D lambda_i . r_i`` for both fields, closed form plus central differences.

    The step is ``1e-6 (1 + |v|)`` so it scales with the state.
    """
    _check_v(state.v)
    v, w = state.v, state.w
    ed = eigen(state, t, params)
    h = 1e-6 * (1 + abs(v))
    h = min(h, 0.5 * v)
    gn1_fd = _directional(lambda a, b: eigenvalues(a, b, t, params)[0], v, w, *ed.r1, h)
    ld2_fd = _directional(lambda a, b: eigenvalues(a, b, t, params)[1], v, w, *ed.r2, h)
    return FieldCharacter(float(_gn1_closed(v, t, params)), 0.0, float(gn1_fd), float(ld2_fd))


def h_functions(v_minus: float, v: float, gamma: float) -> tuple[float, float]:
    """The polynomials whose signs decide which branch of S1 is admissible."""
    g = gamma
    h1 = v ** (g + 1) + g * v_minus ** (g + 1) - (g + 1) * v * v_minus**g
    h2 = -g * v ** (g + 1) - v_minus ** (g + 1) + (g + 1) * v**g * v_minus
    return h1, h2


def lax_admissible_1shock(v_minus: float, v: float, gamma: float) -> bool:
    """Lax admissibility of the 1-shock from ``v_minus`` to ``v``.

    Raises ``ValueError`` for a zero-strength shock.
    """
    if v_minus <= 0 or v <= 0:
        raise PositivityError("densities must be positive")
    if abs(v - v_minus) < 1e-12 * v_minus:
        raise ValueError("degenerate 1-shock: v == v_minus")
    if gamma == -1 or gamma >= 0:
        raise ValueError("gamma must be negative and != -1")
    flag = (-1 < gamma < 0 and v > v_minus) or (gamma < -1 and v < v_minus)

    # lambda_1(L) - sigma_1 = A E h1/(v - v_minus), sigma_1 - lambda_1(R) = -A E h2/(v - v_minus),
    # with E > 0 and A < 0; both must be positive.
    h1, h2 = h_functions(v_minus, v, gamma)
    side = np.sign(v - v_minus)
    by_h = (-np.sign(h1) * side > 0) and (-np.sign(h2) * side < 0)
    if by_h != flag:
        raise AssertionError(f"h-sign rule disagrees with Lax side rule at v-={v_minus}, v={v}")
    return flag


def max_wave_speed(states: Iterable[TransState] | tuple[np.ndarray, np.ndarray], t: float,
                   params: PhysParams) -> float:
    """Largest ``|lambda|`` over a collection of states, or over ``(v, w)`` arrays."""
    if isinstance(states, tuple) and len(states) == 2 and isinstance(states[0], np.ndarray):
        v, w = states
    else:
        states = list(states)
        if not states:
            raise ValueError("max_wave_speed needs at least one state")
        v = np.array([s.v for s in states])
        w = np.array([s.w for s in states])
    if v.size == 0:
        raise ValueError("max_wave_speed needs at least one state")
    _check_v(v)
    l1, l2 = eigenvalues(v, w, t, params)
    lam = float(max(np.max(np.abs(l1)), np.max(np.abs(l2))))
    if not lam > 0:
        raise ValueError("zero or non-finite wave speed")
    return lam
