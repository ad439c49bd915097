import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vgcg.model import (
    ConservedPair, Direction, FlowCase, ParameterError, PositivityError, PrimState, TransState,
    change_frame, conserved_and_flux, flux, flux_of_conserved, pressure, state_of_conserved,
    validate_params,
)


def test_validate_params_constant_c():
    p = validate_params(-10, -2, 0.01, 3, 10)
    assert p.case is FlowCase.ETA_NEQ_K
    assert p.c == pytest.approx(10 / 2.99, rel=1e-12)
    assert p.c == pytest.approx(3.34448, abs=1e-5)


@pytest.mark.parametrize("args", [
    (-10, -1, 0.01, 3, 10),   # gamma = -1 excluded
    (10, -2, 0.01, 3, 10),    # A must be negative
    (-10, 0.5, 0.01, 3, 10),  # gamma must be negative
    (-10, -2, 0.0, 3, 10),
    (-10, -2, 0.01, 0.0, 10),
    (-10, -2, 0.01, 3, 0.0),
    (-10, -2, math.nan, 3, 10),
])
def test_validate_params_rejects(args):
    with pytest.raises(ParameterError):
        validate_params(*args)


def test_eta_eq_k_case():
    p = validate_params(-10, -2, 4, 4, 2)
    assert p.case is FlowCase.ETA_EQ_K
    with pytest.raises(AttributeError):
        p.c
    assert p.c_or_zero == 0.0


def test_advisories():
    p = validate_params(-5, -2, 4, 3, 2)
    assert any("eta - k" in a for a in p.advisories)
    assert any("|A| < 10" in a for a in p.advisories)
    assert validate_params(-10, -2, 0.01, 3, 10).advisories == ()


def test_pressure_values(case1):
    assert pressure(1.0, 0.0, case1) == pytest.approx(-10.0)
    assert pressure(2.0, 0.0, case1) == pytest.approx(-2.5)
    with pytest.raises(PositivityError):
        pressure(0.0, 0.0, case1)


def test_change_frame_eta_eq_k():
    p = validate_params(-10, -2, 4, 4, 2)
    s = change_frame(TransState(1.0, 2.0), 0.5, p, Direction.TRANS_TO_PRIM)
    assert s.rho == pytest.approx(math.e**2, rel=1e-14)
    assert s.u == pytest.approx(3.0, rel=1e-14)


def test_change_frame_identity_at_zero(case1):
    s = change_frame(PrimState(2.0, -3.0), 0.0, case1, Direction.PRIM_TO_TRANS)
    assert (s.v, s.w) == pytest.approx((2.0, -3.0), abs=1e-15)


def test_change_frame_type_errors(case1):
    with pytest.raises(TypeError):
        change_frame(TransState(1, 1), 0.0, case1, Direction.PRIM_TO_TRANS)
    with pytest.raises(TypeError):
        change_frame(PrimState(1, 1), 0.0, case1, Direction.TRANS_TO_PRIM)


@settings(max_examples=200, deadline=None)
@given(rho=st.floats(0.05, 10), u=st.floats(-20, 20), t=st.floats(0, 3),
       k=st.sampled_from([0.01, -0.01, 2.0, -2.0, 3.0]))
def test_change_frame_round_trip(rho, u, t, k):
    p = validate_params(-10, -2, k, 3, 10)
    s = change_frame(PrimState(rho, u), t, p, Direction.PRIM_TO_TRANS)
    back = change_frame(s, t, p, Direction.TRANS_TO_PRIM)
    assert back.rho == pytest.approx(rho, rel=1e-12)
    assert back.u == pytest.approx(u, rel=1e-9, abs=1e-9)


def test_conserved_and_flux(case1):
    c = case1.c
    H, G = conserved_and_flux(TransState(1.0, 0.0), 0.0, case1)
    assert (H.h1, H.h2) == pytest.approx((1.0, c))
    assert G == pytest.approx((10.0, 10.0 * c))
    p = validate_params(-10, -2, 4, 4, 2)
    H, G = conserved_and_flux(TransState(1.0, 0.0), 0.0, p)
    assert (H.h1, H.h2) == pytest.approx((1.0, 0.0))
    assert G == pytest.approx((10.0, 0.0))


def test_state_of_conserved(case1):
    s = state_of_conserved(ConservedPair(2.0, 2 * case1.c), case1)
    assert (s.v, s.w) == pytest.approx((2.0, 0.0), abs=1e-14)
    with pytest.raises(PositivityError):
        state_of_conserved((0.0, 1.0), case1)


@pytest.mark.parametrize("k,eta", [(0.01, 3.0), (4.0, 4.0), (-2.0, 3.0)])
def test_flux_of_conserved_matches_flux(k, eta):
    p = validate_params(-10, -0.5, k, eta, 10)
    rng = np.random.default_rng(3)
    v, w, t = rng.uniform(0.1, 5, 50), rng.uniform(-10, 10, 50), 0.7
    from vgcg.model import conserved
    h1, h2 = conserved(v, w, p)
    np.testing.assert_allclose(flux_of_conserved(h1, h2, t, p), flux(v, w, t, p), rtol=1e-12, atol=1e-10)


def test_states_reject_nonpositive():
    with pytest.raises(PositivityError):
        TransState(0.0, 1.0)
    with pytest.raises(PositivityError):
        PrimState(-1.0, 1.0)
    with pytest.raises(ValueError):
        TransState(1.0, math.inf)
