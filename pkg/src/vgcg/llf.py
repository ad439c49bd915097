"""Lax-Friedrichs finite-volume solver for the transformed conservative system.

The update is the central scheme

    U_j^{n+1} = (U_{j-1} + U_{j+1}) / 2 - dt / (2 dx) (F_{j+1} - F_{j-1})

with ``dt = cfl dx / lambda_max`` recomputed every step from the largest
characteristic speed on the grid, fluxes frozen at the start of the step, and
Neumann (copy) ghost cells at both ends.  The solver works on ``(h1, h2)`` and
converts back to ``(v, w)`` only for output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .characteristics import eigenvalues
from .model import PhysParams, RiemannProblem, conserved, flux_of_conserved


class SolverAbort(RuntimeError):
    """Raised when a step loses positivity or produces non-finite values."""

    def __init__(self, msg, t=None, partial=None):
        super().__init__(msg)
        self.t = t
        self.partial = partial


@dataclass(frozen=True)
class SolverConfig:
    nx: int = 1000
    x_min: float = -500.0
    x_max: float = 500.0
    cfl: float = 0.5
    iterations: int = 20
    steps_per_iteration: int = 1000
    renorm_interval: int = 100
    renorm_tol: float = 1e-7
    # when set, each iteration advances a fixed slice t_end / iterations of physical time
    t_end: float | None = None

    def __post_init__(self):
        if int(self.nx) != self.nx or self.nx < 8:
            raise ValueError("nx must be an integer >= 8")
        if not self.x_min < self.x_max:
            raise ValueError("x_min must be below x_max")
        if not 0 < self.cfl <= 0.5:
            raise ValueError("cfl must lie in (0, 0.5]")
        if self.iterations < 1 or self.steps_per_iteration < 1:
            raise ValueError("iterations and steps_per_iteration must be positive")
        if self.renorm_interval < 0 or self.renorm_tol < 0:
            raise ValueError("renormalization settings must be non-negative")
        if self.t_end is not None and not self.t_end > 0:
            raise ValueError("t_end must be positive")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.nx

    def centers(self) -> np.ndarray:
        return self.x_min + (np.arange(self.nx) + 0.5) * self.dx


@dataclass
class FieldState:
    t: float
    h1: np.ndarray
    h2: np.ndarray
    dx: float

    def vw(self, params: PhysParams):
        return self.h1, self.h2 / self.h1 - params.c_or_zero

    def copy(self) -> "FieldState":
        return FieldState(self.t, self.h1.copy(), self.h2.copy(), self.dx)


@dataclass(frozen=True)
class Snapshot:
    t: float
    v: np.ndarray
    w: np.ndarray
    steps: int = 0


@dataclass
class RunResult:
    x: np.ndarray
    snapshots: list[Snapshot]
    dt_history: np.ndarray
    lambda_history: np.ndarray
    delta_metric: np.ndarray
    problem: RiemannProblem
    config: SolverConfig
    initial: Snapshot | None = None
    n_steps: int = 0
    notes: list[str] = field(default_factory=list)

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.snapshots])


def init(prob: RiemannProblem, config: SolverConfig, params: PhysParams | None = None) -> FieldState:
    """Piecewise-constant data with the jump at the cell interface nearest to ``x = 0``."""
    params = params or prob.params
    if not config.x_min < 0 < config.x_max:
        raise ValueError("the domain must contain x = 0")
    x = config.centers()
    j0 = int(round((0.0 - config.x_min) / config.dx))
    left = np.arange(config.nx) < j0
    v = np.where(left, prob.left.v, prob.right.v).astype(float)
    w = np.where(left, prob.left.w, prob.right.w).astype(float)
    h1, h2 = conserved(v, w, params)
    assert len(x) == config.nx
    return FieldState(0.0, np.asarray(h1, float), np.asarray(h2, float), config.dx)


def wave_speed(fs: FieldState, params: PhysParams) -> float:
    v, w = fs.vw(params)
    l1, l2 = eigenvalues(v, w, fs.t, params)
    lam = max(float(np.max(np.abs(l1))), float(np.max(np.abs(l2))))
    if not (lam > 0 and math.isfinite(lam)):
        raise SolverAbort(f"invalid wave speed {lam!r} at t={fs.t!r}", fs.t)
    return lam


def step(fs: FieldState, config: SolverConfig, params: PhysParams,
         dt_max: float | None = None) -> tuple[FieldState, float, float]:
    """One Lax-Friedrichs step.  Returns the new state, ``dt`` and ``lambda_max``."""
    if np.any(fs.h1 <= 0):
        raise SolverAbort(f"positivity lost before step at t={fs.t!r}", fs.t)
    lam = wave_speed(fs, params)
    dt = config.cfl * fs.dx / lam
    if dt_max is not None and dt_max < dt:
        dt = dt_max
    U1 = np.concatenate(([fs.h1[0]], fs.h1, [fs.h1[-1]]))
    U2 = np.concatenate(([fs.h2[0]], fs.h2, [fs.h2[-1]]))
    F1, F2 = flux_of_conserved(U1, U2, fs.t, params)
    r = dt / (2 * fs.dx)
    n1 = 0.5 * (U1[:-2] + U1[2:]) - r * (F1[2:] - F1[:-2])
    n2 = 0.5 * (U2[:-2] + U2[2:]) - r * (F2[2:] - F2[:-2])
    if not (np.all(np.isfinite(n1)) and np.all(np.isfinite(n2))):
        raise SolverAbort(f"non-finite values after step at t={fs.t!r}", fs.t)
    if np.any(n1 <= 0):
        j = int(np.argmin(n1))
        raise SolverAbort(f"positivity lost at cell {j} (h1={n1[j]!r}) at t={fs.t + dt!r}", fs.t)
    return FieldState(fs.t + dt, n1, n2, fs.dx), dt, lam


def renormalize(fs: FieldState, prob: RiemannProblem, tol: float, params: PhysParams) -> int:
    """Clamp cells that sit within ``tol`` (in both v and w) of a plateau state.  Returns the count."""
    v, w = fs.vw(params)
    changed = 0
    for s in (prob.left, prob.right):
        near = (np.abs(v - s.v) <= tol) & (np.abs(w - s.w) <= tol)
        near &= ~((v == s.v) & (w == s.w))
        if np.any(near):
            h1, h2 = conserved(s.v, s.w, params)
            fs.h1[near] = h1
            fs.h2[near] = h2
            changed += int(near.sum())
    return changed


def _snapshot(fs: FieldState, params: PhysParams, steps: int = 0) -> Snapshot:
    v, w = fs.vw(params)
    return Snapshot(fs.t, v.copy(), w.copy(), steps)


def run(prob: RiemannProblem, config: SolverConfig, params: PhysParams | None = None) -> RunResult:
    params = params or prob.params
    fs = init(prob, config, params)
    x = config.centers()
    initial = _snapshot(fs, params)
    snaps, dts, lams = [], [], []
    n = 0

    def partial():
        return RunResult(x, list(snaps), np.array(dts), np.array(lams),
                         np.array([s.v.max() for s in snaps]), prob, config, initial, n)

    try:
        for it in range(config.iterations):
            if config.t_end is None:
                for _ in range(config.steps_per_iteration):
                    fs, dt, lam = step(fs, config, params)
                    dts.append(dt)
                    lams.append(lam)
                    n += 1
                    if config.renorm_interval and n % config.renorm_interval == 0:
                        renormalize(fs, prob, config.renorm_tol, params)
            else:
                target = config.t_end * (it + 1) / config.iterations
                while fs.t < target:
                    fs, dt, lam = step(fs, config, params, dt_max=target - fs.t)
                    if target - fs.t < 1e-12 * max(target, 1.0):
                        fs.t = target
                    dts.append(dt)
                    lams.append(lam)
                    n += 1
                    if config.renorm_interval and n % config.renorm_interval == 0:
                        renormalize(fs, prob, config.renorm_tol, params)
            snaps.append(_snapshot(fs, params, n))
    except SolverAbort as exc:
        exc.partial = partial()
        raise
    return partial()


def run_with(prob: RiemannProblem, config: SolverConfig, **overrides) -> RunResult:
    return run(prob, replace(config, **overrides))


def detect_delta(result: RunResult, factor: float = 5.0) -> tuple[bool, float]:
    """Flag a delta shock from the growth of ``max v`` across snapshots.

    Returns ``(is_delta, slope)`` where ``slope`` is the least-squares growth of
    ``max v`` per iteration over the last half of the snapshots.
    """
    m = np.asarray(result.delta_metric, float)
    if len(m) < 3:
        raise ValueError("delta detection needs at least 3 snapshots")
    half = m[len(m) // 2:] if len(m) >= 4 else m
    idx = np.arange(len(half))
    slope = float(np.polyfit(idx, half, 1)[0]) if len(half) >= 2 else 0.0
    plateau = max(result.problem.left.v, result.problem.right.v)
    monotone = bool(np.all(np.diff(half) > 0))
    return bool(m[-1] > factor * plateau and monotone), slope
