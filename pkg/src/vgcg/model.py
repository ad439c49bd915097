"""Physical parameters, fluid states and the conservative form of the system.

The balance laws

    rho_t + (rho (u - p))_x = k rho
    (rho u)_t + (rho u (u - p))_x = eta rho u + beta rho,      p = A rho**gamma e**(eta t)

are turned into a pair of conservation laws by the substitution

    rho = v e**(k t),   u = w + beta t                         (eta == k)
    rho = v e**(k t),   u = (w + c) e**((eta - k) t) - c       (eta != k, c = beta / (eta - k))

Everything downstream works in the transformed ``(v, w)`` frame.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np


class ParameterError(ValueError):
    """Raised for physical constants outside the admissible set."""


class PositivityError(ValueError):
    """Raised when a density-like quantity is not strictly positive."""


class FlowCase(enum.Enum):
    ETA_EQ_K = "eta=k"
    ETA_NEQ_K = "eta!=k"


class Direction(enum.Enum):
    PRIM_TO_TRANS = "prim_to_trans"
    TRANS_TO_PRIM = "trans_to_prim"


@dataclass(frozen=True)
class PhysParams:
    """The five constants ``A, gamma, k, eta, beta`` of the pressure law and sources.

    Invalid combinations raise :class:`ParameterError` on construction.
    Non-fatal remarks about the numerical regime end up in ``advisories``.
    """

    A: float
    gamma: float
    k: float
    eta: float
    beta: float
    advisories: tuple[str, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        vals = dict(A=self.A, gamma=self.gamma, k=self.k, eta=self.eta, beta=self.beta)
        for name, val in vals.items():
            if not math.isfinite(val):
                raise ParameterError(f"{name} must be finite, got {val!r}")
            object.__setattr__(self, name, float(val))
        if self.A >= 0:
            raise ParameterError(f"A must be negative, got {self.A}")
        if self.gamma >= 0:
            raise ParameterError(f"gamma must be negative, got {self.gamma}")
        if self.gamma == -1:
            raise ParameterError("gamma = -1 (varying Chaplygin gas) is excluded")
        for name in ("k", "eta", "beta"):
            if vals[name] == 0:
                raise ParameterError(f"{name} must be non-zero")

        notes = list(self.advisories)
        a = self.eta - self.k
        if a <= 0:
            notes.append(
                "eta - k <= 0: the characteristic speeds merge as t grows, "
                "strict hyperbolicity is lost in the long-time limit")
        if a != 0 and abs(a) < 1e-12:
            notes.append("|eta - k| < 1e-12: beta / (eta - k) is ill-conditioned")
        if abs(self.A) < 10:
            notes.append("|A| < 10 is outside the range the reference experiments used")
        object.__setattr__(self, "advisories", tuple(dict.fromkeys(notes)))

    @property
    def case(self) -> FlowCase:
        return FlowCase.ETA_EQ_K if self.eta == self.k else FlowCase.ETA_NEQ_K

    @property
    def a(self) -> float:
        """Growth rate ``eta - k`` of the transformed velocity."""
        return self.eta - self.k

    @property
    def c(self) -> float:
        if self.case is FlowCase.ETA_EQ_K:
            raise AttributeError("c = beta / (eta - k) is undefined when eta == k")
        return self.beta / (self.eta - self.k)

    @property
    def c_or_zero(self) -> float:
        return 0.0 if self.case is FlowCase.ETA_EQ_K else self.c

    @property
    def kg1(self) -> float:
        """The exponent rate ``k (gamma + 1)`` that drives the curve motion."""
        return self.k * (self.gamma + 1.0)

    def as_dict(self) -> dict[str, float]:
        return dict(A=self.A, gamma=self.gamma, k=self.k, eta=self.eta, beta=self.beta)


def validate_params(A, gamma, k, eta, beta) -> PhysParams:
    return PhysParams(A=A, gamma=gamma, k=k, eta=eta, beta=beta)


@dataclass(frozen=True)
class PrimState:
    rho: float
    u: float

    def __post_init__(self):
        if not (self.rho > 0 and math.isfinite(self.rho)):
            raise PositivityError(f"rho must be positive and finite, got {self.rho!r}")
        if not math.isfinite(self.u):
            raise ValueError(f"u must be finite, got {self.u!r}")


@dataclass(frozen=True)
class TransState:
    v: float
    w: float

    def __post_init__(self):
        if not (self.v > 0 and math.isfinite(self.v)):
            raise PositivityError(f"v must be positive and finite, got {self.v!r}")
        if not math.isfinite(self.w):
            raise ValueError(f"w must be finite, got {self.w!r}")


@dataclass(frozen=True)
class RiemannProblem:
    left: TransState
    right: TransState
    params: PhysParams

    @classmethod
    def from_values(cls, left, right, params: PhysParams) -> "RiemannProblem":
        return cls(TransState(*left), TransState(*right), params)

    @property
    def is_constant(self) -> bool:
        return self.left == self.right


@dataclass(frozen=True)
class ConservedPair:
    h1: float
    h2: float

    def __post_init__(self):
        if not self.h1 > 0:
            raise PositivityError(f"h1 = v must be positive, got {self.h1!r}")


def pressure(rho, t, params: PhysParams):
    rho = np.asarray(rho, dtype=float)
    if np.any(rho <= 0):
        raise PositivityError("pressure is only defined for rho > 0")
    p = params.A * rho**params.gamma * np.exp(params.eta * t)
    return p if p.ndim else float(p)


def change_frame(state, t: float, params: PhysParams, direction: Direction):
    """Map a state between the original ``(rho, u)`` and transformed ``(v, w)`` frames."""
    direction = Direction(direction)
    if direction is Direction.PRIM_TO_TRANS:
        if not isinstance(state, PrimState):
            raise TypeError("PRIM_TO_TRANS expects a PrimState")
        v = state.rho * math.exp(-params.k * t)
        if params.case is FlowCase.ETA_EQ_K:
            w = state.u - params.beta * t
        else:
            c = params.c
            w = (state.u + c) * math.exp(-params.a * t) - c
        return TransState(v, w)

    if not isinstance(state, TransState):
        raise TypeError("TRANS_TO_PRIM expects a TransState")
    rho = state.v * math.exp(params.k * t)
    if params.case is FlowCase.ETA_EQ_K:
        u = state.w + params.beta * t
    else:
        c = params.c
        u = (state.w + c) * math.exp(params.a * t) - c
    return PrimState(rho, u)


def pressure_factor(v, t, params: PhysParams):
    """``v**gamma e**(k t (gamma+1))``, the combination every curve and speed is built from."""
    return v**params.gamma * np.exp(params.kg1 * t)


def conserved(v, w, params: PhysParams):
    """Conserved quantities ``H = (v, v (w + c))`` (``c = 0`` when eta == k)."""
    return v, v * (w + params.c_or_zero)


def flux(v, w, t, params: PhysParams):
    """Flux ``G`` of the transformed system; works elementwise on arrays.

    The second component is ``(w + c) G1`` in both cases (Keyfitz-Kranzer structure).
    """
    A, g = params.A, params.gamma
    if params.case is FlowCase.ETA_EQ_K:
        g1 = v * (w + params.beta * t) - A * v ** (g + 1) * np.exp(params.kg1 * t)
        return g1, w * g1
    c = params.c
    ea = np.exp(params.a * t)
    W = w + c
    g1 = v * W * ea - v * c - A * v ** (g + 1) * np.exp(params.kg1 * t) * ea
    return g1, W * g1


def flux_of_conserved(h1, h2, t, params: PhysParams):
    """Flux written directly in terms of ``H`` so the solver never leaves conserved form."""
    A, g = params.A, params.gamma
    W = h2 / h1
    if params.case is FlowCase.ETA_EQ_K:
        g1 = h2 + h1 * params.beta * t - A * h1 ** (g + 1) * np.exp(params.kg1 * t)
        return g1, W * g1
    ea = np.exp(params.a * t)
    g1 = h2 * ea - h1 * params.c - A * h1 ** (g + 1) * np.exp(params.kg1 * t) * ea
    return g1, W * g1


def conserved_and_flux(state: TransState, t: float, params: PhysParams):
    h1, h2 = conserved(state.v, state.w, params)
    g1, g2 = flux(state.v, state.w, t, params)
    return ConservedPair(float(h1), float(h2)), (float(g1), float(g2))


def state_of_conserved(H: ConservedPair | tuple, params: PhysParams) -> TransState:
    h1, h2 = (H.h1, H.h2) if isinstance(H, ConservedPair) else H
    if not h1 > 0:
        raise PositivityError(f"loss of positivity: h1 = {h1!r}")
    return TransState(h1, h2 / h1 - params.c_or_zero)
