import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from vgcg.model import TransState, validate_params
from vgcg.regions import (
    BOUNDARY_TOL, RegionLabel, SolutionForm, asymptotic_region, case_of, classify,
    crossing_times, limit_margin, raster_csv, region_raster,
)
from vgcg.wavecurves import CurveKind, curve_w

LEFT = TransState(1.0, 3.0)


def test_case_ids(case1, case2, case3, case4):
    assert [case_of(p).id for p in (case1, case2, case3, case4)] == [1, 2, 3, 4]


def test_classify_examples(case1):
    assert classify(LEFT, TransState(2.0, 2.0), 0.0, case1) == (RegionLabel("IX"), SolutionForm.DeltaCombo)
    assert classify(LEFT, TransState(2.0, -12.0), 0.0, case1) == (RegionLabel("V"), SolutionForm.DeltaOC)
    assert classify(LEFT, TransState(0.5, 8.0), 0.0, case1)[1] is SolutionForm.S1C2
    assert classify(LEFT, TransState(0.5, -10.0), 0.0, case1)[1] is SolutionForm.S1R2


def test_case3_swaps_vi_vii(case3):
    assert classify(LEFT, TransState(0.5, 8.0), 0.0, case3) == (RegionLabel("VI"), SolutionForm.S1R2)
    assert classify(LEFT, TransState(0.5, -10.0), 0.0, case3) == (RegionLabel("VII"), SolutionForm.S1C2)


def test_case2_regions(case2):
    assert classify(LEFT, TransState(0.25, 6.0), 0.0, case2)[1] is SolutionForm.R2C2
    assert classify(LEFT, TransState(2.0, 5.0), 0.0, case2)[0].name == "III"
    assert classify(LEFT, TransState(1.5, 2.5), 0.0, case2)[0].name == "IV"
    assert classify(LEFT, TransState(2.0, -10.0), 0.0, case2)[0].name == "V"


def test_identical_states(case1):
    lab, form = classify(LEFT, LEFT, 0.0, case1)
    assert lab.on_boundary and form is SolutionForm.Constant
    assert crossing_times(LEFT, LEFT, case1, 3.0) == []


def test_on_boundary(case1):
    w = curve_w(CurveKind.C2, LEFT, 2.0, 0.0, case1)
    lab, form = classify(LEFT, TransState(2.0, w + 0.5 * BOUNDARY_TOL), 0.0, case1)
    assert lab == RegionLabel("OnBoundary", CurveKind.C2)
    assert str(lab) == "OnBoundary(C2)"
    assert form is SolutionForm.Unknown


def test_viii_note(case1):
    p = validate_params(-500, -7, 0.01, 3, 10)
    # the band between C2 and the lagged R2 opens only for t > 0
    assert classify(LEFT, TransState(0.95, -212.74), 0.0, p)[0].name != "VIII"
    lab, form = classify(LEFT, TransState(0.95, -212.74), 0.03, p)
    assert lab.name == "VIII" and form is SolutionForm.R2C2orC2R2
    assert "R2 first" in lab.note


@pytest.mark.parametrize("params,right,name", [
    ((-10, -2, 0.01, 3, 10), (2.0, 2.0), "V"),
    ((-10, -0.5, -0.01, 3, 10), (2.0, 4.0), "I"),
    ((-10, -0.5, 0.01, 3, 10), (0.5, 4.0), "I"),
])
def test_asymptotic_examples(params, right, name):
    p = validate_params(*params)
    assert asymptotic_region(LEFT, TransState(*right), p)[0].name == name


def test_crossing_worked_example():
    p = validate_params(-10, -2, 2, 3, 10)
    ev = crossing_times(LEFT, TransState(2.0, 2.0), p, 3.0)
    assert len(ev) == 1
    e = ev[0]
    assert e.t_star == pytest.approx(0.5 * math.log(12.5), abs=1e-8)
    assert (e.from_label.name, e.to_label.name) == ("IX", "V")
    assert e.boundary is CurveKind.SOver


def test_crossing_events_consistent():
    p = validate_params(-10, -2, 2, 3, 10)
    rng = np.random.default_rng(7)
    for _ in range(20):
        right = TransState(float(rng.uniform(0.2, 3)), float(rng.uniform(-15, 15)))
        for e in crossing_times(LEFT, right, p, 3.0):
            assert classify(LEFT, right, e.t_star - 1e-6, p)[0] == e.from_label
            assert classify(LEFT, right, e.t_star + 1e-6, p)[0] == e.to_label


def test_crossing_horizon_error(case1):
    with pytest.raises(ValueError):
        crossing_times(LEFT, TransState(2, 2), case1, 0.0)


@settings(max_examples=200, deadline=None)
@given(v=st.floats(0.1, 4), w=st.floats(-20, 20), t=st.floats(0, 3),
       params=st.sampled_from([(-10, -2, 0.01), (-10, -0.5, -0.01), (-10, -2, -0.01), (-10, -0.5, 0.01)]))
def test_locally_constant(v, w, t, params):
    p = validate_params(*params, 3, 10)
    right = TransState(v, w)
    lab, _ = classify(LEFT, right, t, p)
    assume(not lab.on_boundary)
    from vgcg.regions import boundary_values
    vals = boundary_values(LEFT, v, t, p)
    assume(min(abs(w - x) for x in vals.values()) > 1e-5)
    for dw in (1e-6, -1e-6):
        assert classify(LEFT, TransState(v, w + dw), t, p)[0] == lab


@settings(max_examples=200, deadline=None)
@given(v=st.floats(0.1, 4), w=st.floats(-20, 20),
       params=st.sampled_from([(-10, -2, 2.0), (-10, -0.5, -2.0), (-10, -2, 0.6), (-10, -0.5, -0.6)]))
def test_asymptotic_limit(v, w, params):
    p = validate_params(*params, 3, 10)
    assert p.kg1 < 0
    right = TransState(v, w)
    t = 10 * abs(1 / p.kg1)
    # states closer to w_L than the remaining curve motion are not yet settled
    assume(abs(w - LEFT.w) > 2 * limit_margin(LEFT, v, t, p) + 1e-6)
    assume(abs(v - LEFT.v) > 1e-6)
    assert classify(LEFT, right, t, p)[0] == asymptotic_region(LEFT, right, p)[0]


@pytest.mark.parametrize("params", [(-10, -2, 0.01), (-10, -0.5, -0.01), (-10, -2, -0.01), (-10, -0.5, 0.01)])
def test_region_v_lowest(params):
    p = validate_params(*params, 3, 10)
    rows = region_raster(LEFT, 0.5, p, (0.1, 4), (-40, 40), nv=15, nw=200)
    by_v = {}
    for v, w, lab in rows:
        by_v.setdefault(v, []).append((w, lab))
    for col in by_v.values():
        v_ws = [w for w, lab in col if lab == "V"]
        other = [w for w, lab in col if lab not in ("V",) and not lab.startswith("OnBoundary")]
        if v_ws and other:
            assert max(v_ws) < min(other)


def test_label_sets_by_case():
    rng = np.random.default_rng(11)
    for params, allowed in [((-10, -2, 0.01), {"V", "VI", "VII", "VIII", "IX"}),
                            ((-10, -0.5, -0.01), {"I", "II", "III", "IV", "V"})]:
        p = validate_params(*params, 3, 10)
        for _ in range(300):
            right = TransState(float(rng.uniform(0.1, 4)), float(rng.uniform(-30, 30)))
            lab, form = classify(LEFT, right, float(rng.uniform(0, 2)), p)
            if not lab.on_boundary:
                assert lab.name in allowed
                assert (form is SolutionForm.DeltaOC) == (lab.name == "V")
                assert (form is SolutionForm.DeltaCombo) == (lab.name == "IX")


def test_raster_csv(case1):
    rows = region_raster(LEFT, 0.0, case1, (0.5, 2), (-5, 5), nv=3, nw=4)
    assert len(rows) == 12
    lines = raster_csv(rows).splitlines()
    assert lines[0] == "v,w,label" and len(lines) == 13
