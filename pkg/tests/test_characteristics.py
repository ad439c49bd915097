import numpy as np
import pytest

from vgcg.characteristics import (
    eigen, eigenvalues, field_character, h_functions, lax_admissible_1shock, max_wave_speed,
)
from vgcg.model import PositivityError, TransState, validate_params


def test_eigen_at_unit_state(case1):
    ed = eigen(TransState(1.0, 0.0), 0.0, case1)
    assert ed.lambda1 == pytest.approx(-10.0)
    assert ed.lambda2 == pytest.approx(10.0)
    assert ed.r1 == (1.0, 0.0)


def test_eigen_eta_eq_k():
    p = validate_params(-10, -2, 4, 4, 2)
    ed = eigen(TransState(1.0, 0.0), 0.0, p)
    assert (ed.lambda1, ed.lambda2) == pytest.approx((-10.0, 10.0))


def test_field_character(case1, case2):
    for p in (case1, case2):
        fc = field_character(TransState(1.3, 2.0), 0.4, p)
        assert fc.ld2 == 0.0
        assert abs(fc.ld2_fd) <= 1e-6 * (1 + abs(eigen(TransState(1.3, 2.0), 0.4, p).lambda2))
        assert fc.gn1 != 0
        assert fc.gn1_fd == pytest.approx(fc.gn1, rel=1e-6)


def test_h_functions_examples():
    assert h_functions(1.0, 0.5, -2) == pytest.approx((0.5, -1.0))
    assert h_functions(1.0, 4.0, -0.5) == pytest.approx((-0.5, 0.25))


@pytest.mark.parametrize("gamma,vm,v,ok", [
    (-2, 1.0, 0.5, True), (-2, 1.0, 2.0, False),
    (-0.5, 1.0, 4.0, True), (-0.5, 1.0, 0.25, False),
])
def test_lax_admissible(gamma, vm, v, ok):
    assert lax_admissible_1shock(vm, v, gamma) is ok


def test_lax_admissible_errors():
    with pytest.raises(ValueError):
        lax_admissible_1shock(1.0, 1.0, -2)
    with pytest.raises(PositivityError):
        lax_admissible_1shock(-1.0, 1.0, -2)


def test_max_wave_speed(case1):
    assert max_wave_speed([TransState(1.0, 0.0)], 0.0, case1) == pytest.approx(10.0)
    v, w = np.array([1.0, 2.0]), np.array([0.0, 0.0])
    assert max_wave_speed((v, w), 0.0, case1) == pytest.approx(10.0)
    with pytest.raises(ValueError):
        max_wave_speed([], 0.0, case1)


def test_eigenvalues_ordered(case1, case2):
    rng = np.random.default_rng(0)
    v, w, t = rng.uniform(0.05, 10, 500), rng.uniform(-20, 20, 500), rng.uniform(0, 3, 500)
    for p in (case1, case2):
        l1, l2 = eigenvalues(v, w, t, p)
        assert np.all(l1 < l2)
