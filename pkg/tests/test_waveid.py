import numpy as np
import pytest

from vgcg.harness.presets import preset
from vgcg.llf import SolverConfig, run
from vgcg.model import RiemannProblem, TransState, validate_params
from vgcg.regions import SolutionForm, classify
from vgcg.waveid import (
    WaveIdConfig, classify_profile, growth_onset, middle_state_error, shock_speed_check,
    synthetic_result,
)
from vgcg.wavecurves import middle_state

P1 = validate_params(-10, -2, 0.01, 3, 10)
LEFT, RIGHT = TransState(1.0, 3.0), TransState(0.5, 8.0)
X = np.arange(-500, 500) + 0.5
STEPS = np.arange(1, 21) * 50
TIMES = STEPS * 0.01
WIDTH = {"S1": lambda: np.full(20, 1.0), "C2": lambda: 0.5 * np.sqrt(STEPS), "R2": lambda: 0.05 * STEPS}


def _synthetic(kinds, mid, shift=0.0):
    pos, wid = [], []
    for i, k in enumerate(kinds):
        drift = -0.03 * STEPS if k == "S1" else 0.05 * STEPS
        pos.append(-150 + 300 * i + shift + drift)
        wid.append(WIDTH[k]())
    prob = RiemannProblem(LEFT, RIGHT, P1)
    return synthetic_result(prob, X, [LEFT, mid, RIGHT], pos, TIMES, wid, STEPS)


def _preset_run(name):
    e = preset(name)
    left, right = e.states()
    res = run(RiemannProblem(left, right, e.params), e.solver)
    return res, classify(left, right, 0.0, e.params)[1]


@pytest.mark.parametrize("kinds,form", [
    (("S1", "C2"), SolutionForm.S1C2), (("S1", "R2"), SolutionForm.S1R2),
    (("R2", "C2"), SolutionForm.R2C2),
])
def test_synthetic_sequences(kinds, form):
    mid = middle_state(LEFT, RIGHT, 0.0, P1) if kinds[0] == "S1" else TransState(0.7, 5.0)
    rep = classify_profile(_synthetic(kinds, mid), form)
    assert rep.sequence == list(kinds)
    assert rep.match is True
    assert rep.middle_state[0] == pytest.approx(mid.v, rel=1e-3)


def test_synthetic_middle_error_zero():
    t_last = TIMES[-1]
    mid = middle_state(LEFT, RIGHT, t_last, P1)
    err = middle_state_error(_synthetic(("S1", "C2"), mid))
    assert err["error"] < 1e-9


def test_translation_invariance():
    mid = middle_state(LEFT, RIGHT, 0.0, P1)
    a = classify_profile(_synthetic(("S1", "R2"), mid))
    b = classify_profile(_synthetic(("S1", "R2"), mid, shift=41.0))
    assert a.sequence == b.sequence
    for da, db in zip(a.diagnostics, b.diagnostics):
        assert da["growth"] == pytest.approx(db["growth"], rel=1e-9)


def test_constant_run():
    prob = RiemannProblem(LEFT, LEFT, P1)
    res = run(prob, SolverConfig(nx=50, x_min=-25, x_max=25, iterations=4, steps_per_iteration=10))
    rep = classify_profile(res, SolutionForm.Constant)
    assert rep.sequence == [] and rep.match is True
    assert classify_profile(res, SolutionForm.S1C2).match is False


def test_needs_snapshots():
    prob = RiemannProblem(LEFT, RIGHT, P1)
    res = run(prob, SolverConfig(nx=50, x_min=-25, x_max=25, iterations=2, steps_per_iteration=5))
    with pytest.raises(ValueError):
        classify_profile(res)


def test_region_vi_case1():
    res, form = _preset_run("case1-region6-s1c2")
    rep = classify_profile(res, form)
    assert rep.sequence == ["S1", "C2"] and rep.match
    assert rep.middle_state[1] == pytest.approx(3.0, rel=1e-2)
    assert middle_state_error(res, report=rep)["error"] <= 0.05
    chk = shock_speed_check(res, rep)
    assert chk is not None and chk["rel_error"] <= 0.10


def test_region_i_case2():
    res, form = _preset_run("case2-region1-r2c2")
    rep = classify_profile(res, form)
    assert rep.sequence == ["R2", "C2"] and rep.match


@pytest.mark.parametrize("name", ["case1-region5-delta", "case2-region5-delta"])
def test_region_v_is_delta(name):
    res, form = _preset_run(name)
    rep = classify_profile(res, form)
    assert rep.delta and rep.sequence == ["delta"] and rep.match


def test_report_text():
    res, form = _preset_run("case1-region6-s1c2")
    text = classify_profile(res, form).to_text()
    assert text.startswith("sequence: S1 C2")
    assert "middle_state" in text


def test_thresholds_are_configurable():
    mid = middle_state(LEFT, RIGHT, 0.0, P1)
    res = _synthetic(("S1", "C2"), mid)
    # a fanning threshold below sqrt(2) turns the diffusive contact into a rarefaction
    assert classify_profile(res, cfg=WaveIdConfig(fan_ratio=1.3)).sequence == ["S1", "R2"]


def test_growth_onset_region_shift():
    e = preset("case1-regionshift-delta")
    left, right = e.states()
    res = run(RiemannProblem(left, right, e.params), e.solver)
    t_star = 0.5 * np.log(12.5)
    out = growth_onset(res, t_star)
    assert out["onset"] and out["post_rate"] > out["pre_rate"]
    with pytest.raises(ValueError):
        growth_onset(res, 10.0)
