"""Delta shock weight and speed for unequal densities with eta = -k gamma.

Integrates the weight ODE for the data (rho, u)_L = (2, 3), (rho, u)_R = (4, 2),
prints a few samples of the trajectory, the deficit residuals, the
overcompressivity verdict, and how the printed closed forms compare with the
quadrature oracle in the equal-density case.

    python demos/delta_weight.py
"""

import numpy as np

from vgcg.deltashock import (
    DeltaProblem, explicit_discrepancy, initial_speed, integrate, overcompressive, residual_bound,
    rh_deficit_residual,
)
from vgcg.model import TransState, validate_params

p = validate_params(-10, -4, 1, 4, 2)
prob = DeltaProblem(2.0, 3.0, 4.0, 2.0, p)
info = initial_speed(prob, detail=True)
print(f"initial speed {info.value:.6f} (roots {info.roots}, pressureless limit {info.pressureless:.6f})")

tr = integrate(prob, t_end=2.0)
res = rh_deficit_residual(tr, prob)
print("\n   t     w_delta    u_delta     omega1       x")
for i in np.linspace(0, len(tr.times) - 1, 9).astype(int):
    print(f"  {tr.times[i]:4.2f}  {tr.w_delta[i]:9.5f}  {tr.u_delta[i]:9.5f}  {tr.omega1[i]:9.5f}  {tr.x[i]:9.5f}")
print(f"\nmax residual {np.abs(res).max():.2e}, bound {residual_bound(tr):.2e}")

oc = overcompressive(TransState(2, 3), TransState(4, 2), None, 0.0, p)
print(f"overcompressive at t = 0: {oc.status.value} "
      f"(lambda2(R) = {oc.lambda2_right}, lambda1(L) = {oc.lambda1_left})")

print("\nprinted closed forms against the quadrature oracle, rho_L = rho_R = 2:")
for q in (validate_params(-10, -4, 4, 4, 2), p, validate_params(-10, -4, 1, 3, 2)):
    d = explicit_discrepancy(DeltaProblem(2, 3, 2, 2, q), [0.5, 1.0, 2.0])
    print(f"  {d['branch']:14s} max relative gap {d['max_rel']:.3g}")
