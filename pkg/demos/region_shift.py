"""Region shift with k = 2: a right state starts in Region IX and drifts into V.

The overcompressive cap S_o moves with time, the classifier reports the crossing,
and the finite-volume run shows max v growing faster once the state is in V.

    python demos/region_shift.py
"""

import math

import numpy as np

from vgcg.harness.presets import preset
from vgcg.llf import run
from vgcg.model import RiemannProblem
from vgcg.regions import classify, crossing_times
from vgcg.waveid import growth_onset

exp = preset("case1-regionshift-delta")
left, right = exp.states()
p = exp.params

print(f"left {left}, right {right}, k(gamma+1) = {p.kg1}")
for t in (0.0, 0.5, 1.0, 1.25, 1.3, 2.0, 3.0):
    lab, form = classify(left, right, t, p)
    print(f"  t = {t:4.2f}  region {lab!s:5s} {form.value}")

ev = crossing_times(left, right, p, 3.0)
for e in ev:
    print(f"crossing at t* = {e.t_star:.12f} ({e.from_label} -> {e.to_label} across {e.boundary.value})")
print(f"closed form 0.5 ln 12.5 = {0.5 * math.log(12.5):.12f}")

res = run(RiemannProblem(left, right, p), exp.solver)
print("\n  t      max v")
for s in res.snapshots:
    print(f"  {s.t:5.2f}  {s.v.max():8.4f}")
on = growth_onset(res, ev[0].t_star)
print(f"\ngrowth rate before t*: {on['pre_rate']:.3f}, after: {on['post_rate']:.3f}, "
      f"monotone after: {on['monotone_post']}")
