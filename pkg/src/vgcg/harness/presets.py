"""Catalog of experiments reproducing the reference figures.

Every entry carries the parameters of one figure caption.  The captions give no
states, so each right state is picked inside the captioned region (left state
``(1, 3)`` throughout unless noted) and each grid is sized so that the waves stay
inside the domain for the whole run.
"""

from __future__ import annotations

import math
from dataclasses import replace

import numpy as np

from ..characteristics import eigenvalues
from ..llf import SolverConfig
from ..model import validate_params
from .config import CurveSpec, Experiment, RegionSpec

LEFT = (1.0, 3.0)
FULL = ("classify", "curves", "regions", "solver", "waveid", "delta")
CLASSICAL = FULL[:-1]
# figures about delta shocks; only these carry the weight ODE
DELTA_FIGURES = frozenset({
    "case1-region5-delta", "case1-region9-delta-2wave", "case1-region9-c2delta-near-sdelta",
    "case1-region9-c2delta-far-sdelta", "case2-region5-delta", "case3-region9-c2delta-near-c2",
    "case3-region9-c2delta-far-c2", "case1-regionshift-delta", "case3-regionshift-c2delta-near-c2",
    "case3-regionshift-c2delta-far-c2", "wdelta-eta-eq-minus-kgamma",
})


def _p(gamma, k, A=-10.0, eta=3.0, beta=10.0):
    return validate_params(A, gamma, k, eta, beta)


def _steps(x_min, x_max, spi, nx=1000):
    return SolverConfig(nx=nx, x_min=x_min, x_max=x_max, iterations=20, steps_per_iteration=spi)


def _timed(x_min, x_max, t_end, nx=1000):
    return SolverConfig(nx=nx, x_min=x_min, x_max=x_max, iterations=20, t_end=t_end)


def _nice(x):
    """Round ``x > 0`` up to two significant digits."""
    e = 10 ** (math.floor(math.log10(x)) - 1)
    return math.ceil(x / e) * e


def fitted(left, right, params, t_end, nx=1000, margin=0.3):
    """Timed run whose domain holds every wave up to ``t_end``.

    The reach on each side is the time integral of the fastest characteristic
    speed in that direction over the two data states.
    """
    ts = np.linspace(0.0, t_end, 2001)
    lam = []
    for s in (left, right):
        l1, l2 = eigenvalues(s[0], s[1], ts, params)
        lam += [l1, l2]
    lam = np.array(lam)
    reach_r = float(np.trapezoid(np.clip(lam, 0, None).max(axis=0), ts))
    reach_l = float(np.trapezoid(np.clip(-lam, 0, None).max(axis=0), ts))
    pad = margin * (reach_r + reach_l) + 1.0
    return _timed(-_nice(reach_l + pad), _nice(reach_r + pad), t_end, nx)


_SMALL_K_CURVES = CurveSpec(times=(0.0, 1.0), v_min=0.1, v_max=4.0, n=200)
_BIG_K_CURVES = CurveSpec(times=(0.0, 0.5, 1.0, 1.5), v_min=0.1, v_max=4.0, n=200)


def _build() -> dict[str, Experiment]:
    P1, P2, P3, P4 = _p(-2, 0.01), _p(-0.5, -0.01), _p(-2, -0.01), _p(-0.5, 0.01)
    entries = [
        # Case 1: gamma < -1, k > 0
        ("case1-region6-s1c2", P1, (0.5, 8.0), _steps(-300, 700, 50),
         "Region VI of Case 1, S1 C2"),
        ("case1-region7-s1r2", P1, (0.5, -10.0), _steps(-300, 700, 50),
         "Region VII of Case 1, S1 R2"),
        ("case1-region8-r2c2", _p(-7, 0.01, A=-500.0), (0.95, -212.74),
         _timed(-300, 300, 0.05), "Region VIII of Case 1, R2 C2 (gamma = -7, A = -500)"),
        ("case1-region5-delta", P1, (2.0, -12.0), _timed(-100, 100, 1.0),
         "Region V of Case 1, delta shock"),
        ("case1-region9-delta-2wave", P1, (2.0, -5.0), _timed(-100, 100, 1.0),
         "Region IX of Case 1, delta then 2-wave, between S_delta and S_o"),
        ("case1-region9-c2delta-near-sdelta", P1, (2.0, 1.5), _timed(-100, 100, 1.0),
         "Region IX of Case 1, C2 delta, close to and above S_delta"),
        ("case1-region9-c2delta-far-sdelta", P1, (2.0, 6.0), _timed(-100, 100, 1.0),
         "Region IX of Case 1, C2 delta, farther from and above S_delta"),
        # Case 2: -1 < gamma < 0, k < 0
        ("case2-region1-r2c2", P2, (0.25, 6.0), _steps(-100, 900, 60),
         "Region I of Case 2, R2 C2"),
        ("case2-region3-s1c2", P2, (2.0, 5.0), _steps(-200, 1800, 90, nx=2000),
         "Region III of Case 2, S1 C2"),
        ("case2-region4-s1c2", P2, (1.5, 2.5), _steps(-200, 1800, 90, nx=2000),
         "Region IV of Case 2, S1 C2"),
        ("case2-region5-delta", P2, (2.0, -10.0), _timed(-100, 100, 1.0),
         "Region V of Case 2, delta shock"),
        # Case 3: gamma < -1, k < 0
        ("case3-region6-s1r2", P3, (0.5, 8.0), _steps(-300, 700, 50),
         "Region VI of Case 3, S1 R2"),
        ("case3-region7-s1c2", P3, (0.5, -10.0), _steps(-300, 700, 50),
         "Region VII of Case 3, S1 C2"),
        ("case3-region9-c2delta-near-c2", P3, (2.0, 9.5), _timed(-100, 100, 1.0),
         "Region IX of Case 3, C2 delta, close to C2 and above S_delta"),
        ("case3-region9-c2delta-far-c2", P3, (2.0, 2.0), _timed(-100, 100, 1.0),
         "Region IX of Case 3, C2 delta, far from C2 and above S_delta"),
        # Case 4: -1 < gamma < 0, k > 0
        ("case4-region1-r2c2", P4, (0.25, 6.0), _steps(-100, 900, 60),
         "Region I of Case 4, R2 C2"),
        ("case4-region3-s1c2", P4, (2.0, 5.0), _steps(-200, 1800, 90, nx=2000),
         "Region III of Case 4, S1 C2"),
        ("case4-region4-s1c2", P4, (1.5, 2.5), _steps(-200, 1800, 90, nx=2000),
         "Region IV of Case 4, S1 C2"),
        # region shifts, k (gamma + 1) < 0
        ("case1-regionshift-delta", _p(-2, 2.0), (2.0, 2.0), _timed(-100, 300, 3.0),
         "Region IX shifting into Region V (k = 2): delta growth after the crossing"),
        ("case1-regionshift-s1c2", _p(-2, 2.0), (2.0, 3.5), fitted(LEFT, (2.0, 3.5), _p(-2, 2.0), 2.0),
         "Region IX shifting into Region VI (k = 2), S1 C2"),
        ("case2-regionshift-r2c2", _p(-0.5, -2.0), (2.0, 3.5),
         fitted(LEFT, (2.0, 3.5), _p(-0.5, -2.0), 2.2),
         "Region III shifting into Region I (k = -2), R2 C2"),
        # region shifts, k (gamma + 1) > 0
        ("case4-regionshift-r2c2", _p(-0.5, 0.6), (0.5, 8.0), fitted(LEFT, (0.5, 8.0), _p(-0.5, 0.6), 2.0),
         "Region I of Case 4 under shift (k = 0.6), R2 C2"),
        ("case4-regionshift-s1c2", _p(-0.5, 0.6), (2.0, -6.0),
         fitted(LEFT, (2.0, -6.0), _p(-0.5, 0.6), 2.0),
         "Region V shifting into Region IV (k = 0.6), S1 C2"),
        ("case3-regionshift-s1r2", _p(-2, -0.6), (0.5, 8.0), fitted(LEFT, (0.5, 8.0), _p(-2, -0.6), 2.0),
         "Region VI of Case 3 under shift (k = -0.6), S1 R2"),
        ("case3-regionshift-s1c2", _p(-2, -0.6), (0.5, -10.0),
         fitted(LEFT, (0.5, -10.0), _p(-2, -0.6), 2.0),
         "Region VII of Case 3 under shift (k = -0.6), S1 C2"),
        ("case3-regionshift-c2delta-near-c2", _p(-2, -2.0), (2.0, 9.5), fitted(LEFT, (2.0, 9.5), _p(-2, -2.0), 1.0),
         "Region IX of Case 3 (k = -2), C2 delta, close to C2"),
        ("case3-regionshift-c2delta-far-c2", _p(-2, -2.0), (2.0, 2.0), fitted(LEFT, (2.0, 2.0), _p(-2, -2.0), 1.0),
         "Region IX of Case 3 (k = -2), C2 delta, far from C2"),
    ]
    out = {}
    for name, params, right, solver, desc in entries:
        big_k = abs(params.k) >= 0.5
        horizon = 3.0 if big_k else 1.0
        t_end = solver.t_end or horizon
        analyses = FULL if name in DELTA_FIGURES else CLASSICAL
        out[name] = Experiment(
            name=name, params=params, left=LEFT, right=right, solver=solver, analyses=analyses,
            out_dir=f"out/{name}", curves=_BIG_K_CURVES if big_k else _SMALL_K_CURVES,
            regions=RegionSpec(horizon=horizon), delta_t_end=min(t_end, 1.0) if big_k else 1.0,
            description=desc)
    # the omega_delta figure: eta = -k gamma, given in the original (rho, u) frame
    wd = _p(-4, 1.0, A=-10.0, eta=4.0, beta=2.0)
    out["wdelta-eta-eq-minus-kgamma"] = Experiment(
        name="wdelta-eta-eq-minus-kgamma", params=wd, left=(2.0, 3.0), right=(4.0, 2.0),
        frame="primitive", solver=_timed(-50, 50, 0.5), analyses=("classify", "delta"),
        out_dir="out/wdelta-eta-eq-minus-kgamma", delta_t_end=2.0,
        curves=CurveSpec(times=(0.0, 1.0), v_min=0.5, v_max=6.0),
        regions=RegionSpec(v_min=0.5, v_max=6.0, w_min=-10, w_max=10, horizon=2.0),
        description="omega_delta for rho_L != rho_R with eta = -k gamma "
                    "(A = -10, gamma = -4, k = 1, eta = 4, beta = 2)")
    return out


CATALOG: dict[str, Experiment] = _build()


def names() -> list[str]:
    return sorted(CATALOG)


def preset(name: str, out_dir: str | None = None) -> Experiment:
    if name not in CATALOG:
        raise KeyError(f"unknown preset {name!r}; available: {', '.join(names())}")
    exp = CATALOG[name]
    return replace(exp, out_dir=out_dir) if out_dir is not None else exp
