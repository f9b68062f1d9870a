import math

import numpy as np
import pytest

from skynoise import StateSpec, build_state, lg_mode, make_grid, skyrmion_number, unit_stokes_of
from skynoise.modes import ModeError


def test_lg_mode_l0_origin():
    assert lg_mode(0, 1.0, 0.0, 0.0) == pytest.approx(math.sqrt(2 / math.pi))


def test_lg_mode_l1_origin_vanishes():
    assert lg_mode(1, 1.0, 0.0, 0.3) == 0.0


def test_lg_mode_l2_value():
    # independent high-precision evaluation (mpmath, 40 digits) of
    # sqrt(2/(pi 2!)) * (sqrt(2))^2 * e^{-1} * e^{i pi/2} at rho=1, phi=pi/4
    import mpmath
    mpmath.mp.dps = 40
    mag = mpmath.sqrt(2 / (mpmath.pi * 2)) * 2 * mpmath.e ** -1
    got = lg_mode(2, 1.0, 1.0, math.pi / 4)
    assert abs(got) == pytest.approx(float(mag), rel=1e-14)
    assert np.angle(got) == pytest.approx(math.pi / 2, abs=1e-14)


def test_lg_mode_negative_l_conjugate_phase():
    up = lg_mode(3, 1.0, 0.7, 0.5)
    dn = lg_mode(-3, 1.0, 0.7, 0.5)
    assert dn == pytest.approx(np.conj(up), rel=1e-15)


def test_lg_mode_overflow_guard():
    with pytest.raises(ModeError):
        lg_mode(31, 1.0, 1.0, 0.0)
    with pytest.raises(ModeError):
        StateSpec(31, 0)


def test_lg_mode_rejects_negative_rho():
    with pytest.raises(ModeError):
        lg_mode(1, 1.0, -0.1, 0.0)


def test_build_state_pure_v_at_origin():
    g = make_grid(128, 128, 3.0)
    st = build_state(StateSpec(1, 0), g)
    j, i = g.ny // 2, g.nx // 2  # pixel nearest origin
    rho = st.data[j, i]
    # the nearest pixel sits half a pitch off-axis, so the H population
    # is bounded by 2 rho^2 rather than exactly zero
    assert abs(rho[0, 0]) < 2 * (g.dx ** 2 + g.dy ** 2) * abs(rho[1, 1])
    assert rho[1, 1].real > 0


def test_build_state_equal_charges_product():
    g = make_grid(64, 64, 3.0)
    spec = StateSpec(0, 0, alpha=0.0)
    assert spec.is_product_like
    st = build_state(spec, g)
    tr = st.trace()
    proj = 0.5 * np.array([[1, 1], [1, 1]])
    normed = st.data / tr[..., None, None]
    assert np.max(np.abs(normed - proj)) < 1e-12


def test_build_state_rank1():
    g = make_grid(128, 128, 3.0)
    st = build_state(StateSpec(2, 1, alpha=0.7), g)
    assert st.rank1_residual() < 1e-12
    assert st.rho.hermitian_residual() < 1e-15


def test_alpha_wraps():
    spec = StateSpec(1, 0, alpha=2 * math.pi + 0.25)
    assert spec.alpha == pytest.approx(0.25)


def test_alpha_independence_of_winding(grid128):
    ns = []
    for alpha in (0.0, math.pi / 3, math.pi):
        st = build_state(StateSpec(1, 0, alpha), grid128)
        ns.append(skyrmion_number(unit_stokes_of(st)).n)
    assert max(ns) - min(ns) < 1e-6


def test_charge_swap_preserves_winding(grid128):
    # swapping H and V conjugates the state by sigma_x, a proper rotation
    # of the polarization sphere, so the winding number is unchanged
    n_a = skyrmion_number(unit_stokes_of(build_state(StateSpec(1, 0), grid128))).n
    n_b = skyrmion_number(unit_stokes_of(build_state(StateSpec(0, 1), grid128))).n
    assert n_b == pytest.approx(n_a, abs=1e-9)


def test_charge_negation_flips_winding(grid128):
    n_a = skyrmion_number(unit_stokes_of(build_state(StateSpec(2, 0), grid128))).n
    n_b = skyrmion_number(unit_stokes_of(build_state(StateSpec(-2, 0), grid128))).n
    assert n_b == pytest.approx(-n_a, abs=1e-9)


def test_target_winding_label():
    assert StateSpec(12, 1).target_winding == 11
