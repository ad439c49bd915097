"""Delta-shock trajectories.

A delta shock carries a Dirac mass ``omega_1(t) delta(x - x(t))`` in ``v``.  With
jumps ``[q] = q_L - q_R`` of the original Riemann data and

    E(t) = (e**(a t) - 1) / a,   F(t) = (e**(b t) - 1) / b,   a = eta - k,  b = eta + k gamma

(``E = t`` when ``a = 0``, ``F = t`` when ``b = 0``), the weight is

    omega_1 = -[rho] g + [rho u] E - A [rho**(gamma+1)] F,    g(t) = int_0^t w_delta e**(a s) ds

and ``g`` solves the quasi-linear ODE

    ([rho] g + B) g' + C g + D = 0,
    B = A [rho**(gamma+1)] F - [rho u] E,   C = -[rho u] e**(a t),
    D = e**(a t) ([rho u**2] E - A [u rho**(gamma+1)] F).

Every coefficient vanishes at t = 0, so the integration starts from a Taylor
series seed at a small positive time.
"""

from __future__ import annotations

import enum
import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate as spi

from .characteristics import eigenvalues
from .model import FlowCase, PhysParams, PositivityError, TransState


class DeltaError(RuntimeError):
    """Base class for delta-shock construction failures."""


class ComplexSpeedError(DeltaError):
    """The initial-speed quadratic has no real root."""


class DeltaBreakdown(DeltaError):
    """The ODE denominator vanished; ``t_break`` and the partial trajectory are attached."""

    def __init__(self, msg, t_break, partial=None):
        super().__init__(msg)
        self.t_break = t_break
        self.partial = partial


class ExplicitBranch(enum.Enum):
    ETA_EQ_K = "eta=k"
    ETA_EQ_MINUS_KGAMMA = "eta=-k*gamma"
    GENERIC = "eta!=-k*gamma"


@dataclass(frozen=True)
class DeltaProblem:
    rho_l: float
    u_l: float
    rho_r: float
    u_r: float
    params: PhysParams

    def __post_init__(self):
        if not (self.rho_l > 0 and self.rho_r > 0):
            raise PositivityError("densities must be positive")

    @classmethod
    def from_states(cls, left: TransState, right: TransState, params: PhysParams):
        # at t = 0 the two frames coincide
        return cls(left.v, left.w, right.v, right.w, params)

    @property
    def jumps(self):
        g = self.params.gamma
        rl, ul, rr, ur = self.rho_l, self.u_l, self.rho_r, self.u_r
        pl, pr = rl ** (g + 1), rr ** (g + 1)
        return (rl - rr, rl * ul - rr * ur, rl * ul**2 - rr * ur**2, pl - pr, ul * pl - ur * pr)

    @property
    def zero_strength(self) -> bool:
        return self.rho_l == self.rho_r and self.u_l == self.u_r

    @property
    def branch(self) -> ExplicitBranch:
        p = self.params
        if p.case is FlowCase.ETA_EQ_K:
            return ExplicitBranch.ETA_EQ_K
        return ExplicitBranch.ETA_EQ_MINUS_KGAMMA if p.eta == -p.k * p.gamma else ExplicitBranch.GENERIC


def _rates(params: PhysParams):
    a = params.a if params.case is FlowCase.ETA_NEQ_K else 0.0
    b = params.eta + params.k * params.gamma
    return a, b


def _phi(r, t):
    """``(e**(r t) - 1) / r`` with the ``r = 0`` limit."""
    if r == 0:
        return t
    return math.expm1(r * t) / r


def coefficients(t: float, prob: DeltaProblem):
    """``(a_g, B, C, D)`` of the ODE ``(a_g g + B) g' + C g + D = 0`` at time ``t``."""
    p = prob.params
    dr, dm, de, dp, dpu = prob.jumps
    a, b = _rates(p)
    E, F, ea = _phi(a, t), _phi(b, t), math.exp(a * t)
    B = p.A * dp * F - dm * E
    C = -dm * ea
    D = ea * (de * E - p.A * dpu * F)
    return dr, B, C, D


def g_prime(t: float, g: float, prob: DeltaProblem, params: PhysParams | None = None) -> float:
    if t <= 0:
        raise ValueError("the delta-shock ODE is singular at t = 0; evaluate at t > 0")
    ag, B, C, D = coefficients(t, prob)
    den = ag * g + B
    num = C * g + D
    scale = abs(ag * g) + abs(B) + 1e-300
    if abs(den) <= 1e-13 * scale:
        raise DeltaBreakdown(f"g' denominator vanishes at t={t!r}", t)
    return -num / den


# ---------------------------------------------------------------- initial speed

@dataclass(frozen=True)
class InitialSpeed:
    value: float
    roots: tuple[float, ...]
    pressureless: float
    note: str = ""

    def __float__(self):
        return self.value


def _quad_coeffs(prob: DeltaProblem, s: float = 1.0):
    dr, dm, de, dp, dpu = prob.jumps
    A = prob.params.A
    return dr, s * A * dp - 2 * dm, de - s * A * dpu


def _real_roots(q2, q1, q0):
    if q2 == 0:
        if q1 == 0:
            return None
        return [-q0 / q1]
    disc = q1 * q1 - 4 * q2 * q0
    if disc < 0:
        return []
    sq = math.sqrt(disc)
    # stable form of the two roots
    qq = -0.5 * (q1 + math.copysign(sq, q1))
    r1 = qq / q2
    r2 = q0 / qq if qq != 0 else r1
    return sorted([r1, r2])


def initial_speed(prob: DeltaProblem, n_cont: int = 400, detail: bool = False):
    """``w_delta(0)`` from the small-t limit of the weight relations.

    For ``rho_L != rho_R`` the quadratic branch is picked by continuation in the
    pressure amplitude from the pressureless delta speed.
    """
    p = prob.params
    rl, ul, rr, ur = prob.rho_l, prob.u_l, prob.rho_r, prob.u_r
    pl_speed = (math.sqrt(rl) * ul + math.sqrt(rr) * ur) / (math.sqrt(rl) + math.sqrt(rr))
    if rl == rr:
        if ul == ur:
            val = ul - p.A * rl**p.gamma / 2
            res = InitialSpeed(val, (val,), pl_speed, "zero-strength data")
        else:
            val = (ul + ur) / 2 - p.A * rl**p.gamma / 2
            res = InitialSpeed(val, (val,), pl_speed)
        return res if detail else res.value

    roots = _real_roots(*_quad_coeffs(prob))
    if not roots:
        raise ComplexSpeedError("the initial-speed quadratic has complex roots: no real delta speed")
    cur = pl_speed
    for s in np.linspace(0.0, 1.0, n_cont + 1)[1:]:
        rs = _real_roots(*_quad_coeffs(prob, s))
        if not rs:
            raise ComplexSpeedError(f"branch continuation hits complex roots at pressure scale {s:.4f}")
        cur = min(rs, key=lambda r: abs(r - cur))
    val = min(roots, key=lambda r: abs(r - cur))

    note = ""
    left, right = TransState(rl, ul), TransState(rr, ur)
    l1L = float(eigenvalues(left.v, left.w, 0.0, p)[0])
    l2R = float(eigenvalues(right.v, right.w, 0.0, p)[1])
    inside = [r for r in roots if l2R < r < l1L]
    if len(inside) == 1 and inside[0] != val:
        note = (f"continuation root {val!r} differs from the only root inside the "
                f"overcompressive bracket {inside[0]!r}; bracket root used")
        val = inside[0]
    res = InitialSpeed(val, tuple(roots), pl_speed, note)
    return res if detail else res.value


# ---------------------------------------------------------------- series seed

def _exp_series(r, n):
    return np.array([r**j / math.factorial(j) for j in range(n)])


def _phi_series(r, n):
    # (e^{rt} - 1)/r = sum_{j>=1} r^{j-1} t^j / j!
    out = np.zeros(n)
    for j in range(1, n):
        out[j] = r ** (j - 1) / math.factorial(j)
    return out


def series_coefficients(prob: DeltaProblem, w0: float, order: int = 6) -> np.ndarray:
    """Taylor coefficients ``g_1..g_order`` of the analytic solution with ``g_1 = w0``."""
    p = prob.params
    dr, dm, de, dp, dpu = prob.jumps
    a, b = _rates(p)
    n = order + 2
    E, F, ea = _phi_series(a, n), _phi_series(b, n), _exp_series(a, n)
    B = p.A * dp * F - dm * E
    C = -dm * ea
    D = np.convolve(ea, de * E - p.A * dpu * F)[:n]
    g = np.zeros(order + 1)
    g[1] = w0
    for m in range(2, order + 1):
        # collect the t**m coefficient with g_m set to zero, then solve for g_m
        gp = np.array([(j + 1) * g[j + 1] for j in range(order)])
        rest = dr * np.convolve(g, gp)[m] + np.convolve(B, gp)[m] + np.convolve(C, g)[m] + D[m]
        lin = dr * g[1] * (m + 1) + B[1] * m + C[0]
        if lin == 0:
            break
        g[m] = -rest / lin
    return g


# ---------------------------------------------------------------- integration

@dataclass(frozen=True)
class StepControl:
    rtol: float = 1e-10
    atol: float = 1e-14
    t0: float = 1e-6
    n_out: int = 4000
    max_steps: int = 2_000_000


@dataclass(frozen=True)
class DeltaTrajectory:
    times: np.ndarray
    g: np.ndarray
    w_delta: np.ndarray
    omega1: np.ndarray
    x: np.ndarray
    omega_bar: np.ndarray
    u_delta: np.ndarray
    t_seed: float = 1e-6
    n_steps: int = 0
    notes: tuple[str, ...] = field(default=())

    def __len__(self):
        return len(self.times)


def _reconstruct(times, g, wd, prob: DeltaProblem) -> DeltaTrajectory:
    p = prob.params
    dr, dm, de, dp, dpu = prob.jumps
    a, b = _rates(p)
    E = np.array([_phi(a, t) for t in times])
    F = np.array([_phi(b, t) for t in times])
    ea = np.exp(a * times)
    omega1 = -dr * g + dm * E - p.A * dp * F
    if p.case is FlowCase.ETA_EQ_K:
        x = g + 0.5 * p.beta * times**2
        u_delta = wd + p.beta * times
    else:
        c = p.c
        x = g + c * (E - times)
        u_delta = (wd + c) * ea - c
    omega_bar = omega1 * np.exp(p.k * times)
    return times, g, wd, omega1, x, omega_bar, u_delta


def _rk4(f, t, y, h):
    k1 = f(t, y)
    k2 = f(t + h / 2, y + h / 2 * k1)
    k3 = f(t + h / 2, y + h / 2 * k2)
    k4 = f(t + h, y + h * k3)
    return y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def integrate(prob: DeltaProblem, params: PhysParams | None = None, t_end: float = 2.0,
              ctrl: StepControl | None = None) -> DeltaTrajectory:
    """Trajectory of the delta shock on a uniform output grid over ``[0, t_end]``.

    ``g`` is advanced with classical RK4 and step doubling; the local error
    estimate is held below ``ctrl.rtol`` relative to ``|g|``.
    """
    if params is not None and params != prob.params:
        raise ValueError("params do not match the problem's parameters")
    if not t_end > 0:
        raise ValueError("t_end must be positive")
    ctrl = ctrl or StepControl()
    p = prob.params
    a, _ = _rates(p)
    times = np.linspace(0.0, t_end, ctrl.n_out + 1)
    w0 = initial_speed(prob)

    if prob.zero_strength:
        g = np.array([w0 * _phi(a, t) for t in times])
        wd = np.full_like(times, w0)
        arrays = _reconstruct(times, g, wd, prob)
        return DeltaTrajectory(*arrays, t_seed=0.0, notes=("zero-strength data",))

    series = series_coefficients(prob, w0)
    t0 = min(ctrl.t0, times[1] / 2)
    gs = np.polynomial.polynomial.polyval(t0, series)

    def f(t, y):
        return g_prime(t, y, prob)

    g_out = np.empty_like(times)
    wd_out = np.empty_like(times)
    g_out[0], wd_out[0] = 0.0, w0
    t, y = t0, gs
    h = t0 / 4
    n_steps = 0
    idx = 1
    try:
        while idx < len(times):
            target = times[idx]
            while t < target:
                if n_steps > ctrl.max_steps:
                    raise DeltaError("step limit exceeded")
                hh = min(h, target - t)
                y_full = _rk4(f, t, y, hh)
                y_half = _rk4(f, t + hh / 2, _rk4(f, t, y, hh / 2), hh / 2)
                err = abs(y_half - y_full) / 15.0
                scale = ctrl.rtol * abs(y_half) + ctrl.atol
                if not math.isfinite(y_half):
                    raise DeltaBreakdown(f"non-finite g at t={t + hh!r}", t + hh)
                if err <= scale:
                    t += hh
                    y = y_half + (y_half - y_full) / 15.0
                    n_steps += 1
                    if err < scale / 32 and hh == h:
                        h *= 2.0
                else:
                    h = hh / 2.0
                    if h < 1e-14 * max(t, 1e-300):
                        raise DeltaBreakdown(f"step size underflow at t={t!r}", t)
            t = target
            g_out[idx] = y
            wd_out[idx] = f(t, y) * math.exp(-a * t)
            idx += 1
    except DeltaBreakdown as exc:
        arrays = _reconstruct(times[:idx], g_out[:idx], wd_out[:idx], prob)
        exc.partial = DeltaTrajectory(*arrays, t_seed=t0, n_steps=n_steps)
        raise

    arrays = _reconstruct(times, g_out, wd_out, prob)
    return DeltaTrajectory(*arrays, t_seed=t0, n_steps=n_steps)


# ---------------------------------------------------------------- oracles for rho_L == rho_R

def _I_closed(a, b, t):
    """``int_0^t e**(a s) F(s) ds``."""
    if b == 0:
        if a == 0:
            return t * t / 2
        return t * math.exp(a * t) / a - math.expm1(a * t) / a**2
    return (_phi(a + b, t) - _phi(a, t)) / b


def oracle_gE(t: float, prob: DeltaProblem, use_quad: bool = True) -> float:
    """``g(t) E(t)`` for equal densities, by quadrature of its exact derivative."""
    if prob.rho_l != prob.rho_r:
        raise ValueError("the quadrature oracle needs rho_L == rho_R")
    p = prob.params
    a, b = _rates(p)
    S = prob.u_l + prob.u_r
    K = p.A * prob.rho_l**p.gamma
    if not use_quad:
        return S * _phi(a, t) ** 2 / 2 - K * _I_closed(a, b, t)
    val, _ = spi.quad(lambda s: math.exp(a * s) * (S * _phi(a, s) - K * _phi(b, s)), 0.0, t,
                      epsabs=0.0, epsrel=1e-13, limit=200)
    return val


def oracle_g(t: float, prob: DeltaProblem) -> float:
    a, _ = _rates(prob.params)
    return oracle_gE(t, prob) / _phi(a, t)


def oracle_wdelta(t: float, prob: DeltaProblem) -> float:
    """``w_delta = S/2 - A rho**gamma (F/E - I/E**2)`` for equal densities."""
    p = prob.params
    a, b = _rates(p)
    S = prob.u_l + prob.u_r
    K = p.A * prob.rho_l**p.gamma
    E, F = _phi(a, t), _phi(b, t)
    Ival, _ = spi.quad(lambda s: math.exp(a * s) * _phi(b, s), 0.0, t, epsabs=0.0, epsrel=1e-13)
    return S / 2 - K * (F / E - Ival / E**2)


def explicit_wdelta(t: float, prob: DeltaProblem, params: PhysParams | None = None) -> float:
    """Printed closed forms of ``w_delta`` for equal densities, transcribed as published.

    The two eta != k forms do not agree with the ODE; compare against
    :func:`oracle_wdelta` before trusting them.
    """
    if prob.rho_l != prob.rho_r:
        raise ValueError("the delta-shock ODE has no explicit solution when rho_L != rho_R")
    if t <= 0:
        raise ValueError("t must be positive")
    p = prob.params
    A, g, k, eta = p.A, p.gamma, p.k, p.eta
    r = prob.rho_l**g
    S = prob.u_l + prob.u_r
    br = prob.branch
    if br is ExplicitBranch.ETA_EQ_K:
        kg = k * (g + 1)
        return S / 2 - (kg * t * r * A * math.exp(kg * t) - r * A * math.exp(kg * t) + A * r) / (
            t**2 * kg**2)
    if br is ExplicitBranch.ETA_EQ_MINUS_KGAMMA:
        pre = 1.0 / (math.exp((k - eta) * t) - 1) ** 2
        return pre * (((1 + (eta - k) * t) * A * r - S) * math.exp(-2 * (eta - k) * t)
                      - (A * r + S) * math.exp((k - eta) * t) + S)
    num1 = (-2 * A * r * (k - eta) * math.exp(t * ((g + 2) * k - eta))
            + (k * g + eta) * S * math.exp(2 * (k - eta) * t)
            - 2 * S * math.exp((k - eta) * t) + 0.5 * S)
    den1 = 2 * (math.exp((k - eta) * t) - 1) ** 2
    num2 = -2 * A * (k - eta) ** 2 * r * math.exp(2 * (k - eta) * t) + A * (k - eta) * r * math.exp(
        k * t * (g + 1))
    den2 = 2 * ((g - 1) * k + 2 * eta) * (math.exp((eta - k) * t) - 1) ** 2
    return num1 / den1 + num2 / den2


def explicit_discrepancy(prob: DeltaProblem, ts) -> dict:
    """Relative gap between the printed formula and the quadrature oracle."""
    rel = []
    for t in ts:
        ref = oracle_wdelta(t, prob)
        rel.append(abs(explicit_wdelta(t, prob) - ref) / max(abs(ref), 1e-300))
    rel = np.array(rel)
    return {"branch": prob.branch.value, "max_rel": float(rel.max()), "agrees_1e-6": bool(rel.max() <= 1e-6)}


# ---------------------------------------------------------------- overcompressivity

class OCStatus(enum.Enum):
    Strict = "Strict"
    WeakBoundary = "WeakBoundary"
    No = "No"


@dataclass(frozen=True)
class OvercompressStatus:
    status: OCStatus
    at: float
    lambda2_right: float
    lambda1_left: float


def overcompressive(left: TransState, right: TransState, sigma: float | None, t: float,
                    params: PhysParams, tol: float = 1e-10) -> OvercompressStatus:
    """Overcompressivity of a delta shock of speed ``sigma`` between ``left`` and ``right``.

    With ``sigma=None`` the test asks whether any admissible speed exists, i.e.
    whether ``lambda2(R) < lambda1(L)``.
    """
    l1L = float(eigenvalues(left.v, left.w, t, params)[0])
    l2R = float(eigenvalues(right.v, right.w, t, params)[1])
    eps = tol * (1 + max(abs(l1L), abs(l2R)))
    if sigma is None:
        if l2R < l1L - eps:
            st = OCStatus.Strict
        elif abs(l2R - l1L) <= eps:
            st = OCStatus.WeakBoundary
        else:
            st = OCStatus.No
        return OvercompressStatus(st, t, l2R, l1L)
    eps = tol * (1 + max(abs(l1L), abs(l2R), abs(sigma)))
    if l2R < sigma < l1L and sigma - l2R > eps and l1L - sigma > eps:
        st = OCStatus.Strict
    elif l2R - eps <= sigma <= l1L + eps:
        st = OCStatus.WeakBoundary
    else:
        st = OCStatus.No
    return OvercompressStatus(st, t, l2R, l1L)


# ---------------------------------------------------------------- residuals

def _derivative(y: np.ndarray, h: float) -> np.ndarray:
    n = len(y)
    if n < 5:
        return np.gradient(y, h, edge_order=2 if n >= 3 else 1)
    d = np.empty_like(y)
    d[2:-2] = (y[:-4] - 8 * y[1:-3] + 8 * y[3:-1] - y[4:]) / (12 * h)
    d[0] = (-25 * y[0] + 48 * y[1] - 36 * y[2] + 16 * y[3] - 3 * y[4]) / (12 * h)
    d[1] = (-3 * y[0] - 10 * y[1] + 18 * y[2] - 6 * y[3] + y[4]) / (12 * h)
    d[-1] = (25 * y[-1] - 48 * y[-2] + 36 * y[-3] - 16 * y[-4] + 3 * y[-5]) / (12 * h)
    d[-2] = (3 * y[-1] + 10 * y[-2] - 18 * y[-3] + 6 * y[-4] - y[-5]) / (12 * h)
    return d


def _u_of_t(u, t, p: PhysParams):
    if p.case is FlowCase.ETA_EQ_K:
        return u + p.beta * t
    c = p.c
    return (u + c) * np.exp(p.a * t) - c


def rh_deficit_residual(traj: DeltaTrajectory, prob: DeltaProblem,
                        params: PhysParams | None = None) -> np.ndarray:
    """Residuals of the original-variable weight equations along ``traj``, shape ``(n, 2)``."""
    t = np.asarray(traj.times)
    if len(t) < 3:
        raise ValueError("trajectory too short to differentiate (needs >= 3 samples)")
    h = np.diff(t)
    if not np.allclose(h, h[0], rtol=1e-9, atol=0):
        raise ValueError("residuals need a uniform time grid")
    p = prob.params
    g = p.gamma
    ekt = np.exp(p.k * t)
    ul, ur = _u_of_t(prob.u_l, t, p), _u_of_t(prob.u_r, t, p)
    rl, rr = prob.rho_l * ekt, prob.rho_r * ekt
    j_r = rl - rr
    j_m = rl * ul - rr * ur
    j_e = rl * ul**2 - rr * ur**2
    j_p = rl ** (g + 1) - rr ** (g + 1)
    j_pu = rl ** (g + 1) * ul - rr ** (g + 1) * ur
    eet = np.exp(p.eta * t)
    ob, ud = traj.omega_bar, traj.u_delta
    r1 = _derivative(ob, h[0]) - (p.k * ob - j_r * ud + j_m - p.A * j_p * eet)
    r2 = _derivative(ob * ud, h[0]) - (p.eta * ob * ud + p.beta * ob - j_m * ud + j_e
                                       - p.A * j_pu * eet)
    return np.column_stack([r1, r2])


def residual_bound(traj: DeltaTrajectory, rel: float = 1e-6) -> float:
    return rel * (1 + float(np.max(np.abs(traj.omega_bar))))


def trajectory_csv(traj: DeltaTrajectory, residuals: np.ndarray | None = None) -> str:
    if residuals is None:
        residuals = np.full((len(traj.times), 2), np.nan)
    buf = io.StringIO()
    buf.write("t,x,w_delta,u_delta,omega1,omega_bar,res1,res2\n")
    cols = (traj.times, traj.x, traj.w_delta, traj.u_delta, traj.omega1, traj.omega_bar,
            residuals[:, 0], residuals[:, 1])
    for row in zip(*cols):
        buf.write(",".join(repr(float(v)) for v in row) + "\n")
    return buf.getvalue()
