import math

import numpy as np
import pytest

from conftest import random_psd_field
from skynoise import (
    StateSpec,
    apply_channel,
    build_state,
    channel_amplitude_damping,
    channel_bit_flip,
    channel_depolarizing,
    channel_diattenuator,
    channel_phase_damping,
    channel_phase_flip,
    channel_retarder,
    convex_combine,
    homotopy_channel,
    make_grid,
    skyrmion_density,
    skyrmion_number,
    stokes_from_density,
    unit_stokes_of,
    verify_cptp,
)
from skynoise.channels import ChannelError, KrausChannel, _field
from skynoise.profiles import constant, gauss_cos, one_minus_gauss_cos

G = make_grid(24, 24, 2.0)


def _stokes_at(field, j=5, i=7):
    S = stokes_from_density(field)
    return np.array([S.sx[j, i], S.sy[j, i], S.sz[j, i]])


def test_retarder_zero_profiles_identity(grid128):
    ch = channel_retarder(G, constant(0.0), constant(0.0), constant(0.0))
    f = random_psd_field(G, seed=1)
    out = apply_channel(f, ch, renormalize=False)
    assert np.max(np.abs(out.data - f.data)) < 1e-14
    rep = verify_cptp(ch)
    assert rep.classification == "trace-preserving"


def test_retarder_paper_profile_cptp():
    ch = channel_retarder(G, gauss_cos(0, math.pi / 3, 2),
                          gauss_cos(0, math.pi / 3, 3), gauss_cos(0, math.pi / 3, 1))
    rep = verify_cptp(ch, tol=1e-12)
    assert rep.classification == "trace-preserving"


def test_constant_retarder_pointwise_density_invariant(grid256, state10_256):
    # constant rotation of the unit Stokes field leaves the winding
    # density pointwise unchanged (det R = 1 contraction identity)
    ch = channel_retarder(grid256, constant(0.8), constant(1.3), constant(-0.4))
    d0 = skyrmion_density(unit_stokes_of(state10_256)).data
    d1 = skyrmion_density(unit_stokes_of(apply_channel(state10_256, ch))).data
    assert np.max(np.abs(d0 - d1)) < 1e-10


def test_diattenuator_identity_and_classification():
    ch = channel_diattenuator(G, constant(0.2), constant(0.9),
                              constant(1.0), constant(1.0))
    f = random_psd_field(G, seed=2)
    out = apply_channel(f, ch, renormalize=False)
    assert np.max(np.abs(out.data - f.data)) < 1e-14
    ch2 = channel_diattenuator(G, constant(0.0), constant(0.0),
                               constant(0.81), constant(0.25))
    rep = verify_cptp(ch2)
    assert rep.classification == "trace-decreasing"
    assert rep.max_psd_defect > -1e-12


def test_diattenuator_conjugation_values():
    ch = channel_diattenuator(G, constant(0.0), constant(0.0),
                              constant(0.81), constant(0.25))
    f = random_psd_field(G, seed=3)
    out = apply_channel(f, ch, renormalize=False)
    want = np.empty_like(f.data)
    want[..., 0, 0] = 0.81 * f.data[..., 0, 0]
    want[..., 1, 1] = 0.25 * f.data[..., 1, 1]
    want[..., 0, 1] = math.sqrt(0.81 * 0.25) * f.data[..., 0, 1]
    want[..., 1, 0] = math.sqrt(0.81 * 0.25) * f.data[..., 1, 0]
    assert np.max(np.abs(out.data - want)) < 1e-12


def test_diattenuator_profile_escape_rejected():
    # the raw transmittance dip exceeds 1 when the cosine goes negative
    with pytest.raises(ChannelError, match="escapes"):
        channel_diattenuator(G, constant(0.0), constant(0.0),
                             one_minus_gauss_cos(0.0, 1.0, 2), constant(1.0))


def test_bit_flip_conventions():
    f = random_psd_field(G, seed=4)
    ident = apply_channel(f, channel_bit_flip(G, constant(1.0)), renormalize=False)
    assert np.max(np.abs(ident.data - f.data)) < 1e-14
    swap = apply_channel(f, channel_bit_flip(G, constant(0.0)), renormalize=False)
    s_in, s_out = _stokes_at(f), _stokes_at(swap)
    assert np.allclose(s_out, [s_in[0], -s_in[1], -s_in[2]], atol=1e-12)


def test_bit_flip_half_symmetrizes():
    f = random_psd_field(G, seed=5)
    out = apply_channel(f, channel_bit_flip(G, constant(0.5)), renormalize=False)
    sx = np.array([[0, 1], [1, 0]])
    want = 0.5 * (f.data + sx @ f.data @ sx)
    assert np.max(np.abs(out.data - want)) < 1e-13


def test_phase_flip_half_kills_equatorial_components():
    f = random_psd_field(G, seed=6)
    out = apply_channel(f, channel_phase_flip(G, constant(0.5)), renormalize=False)
    S = stokes_from_density(out)
    assert np.max(np.abs(S.sx)) < 1e-13
    assert np.max(np.abs(S.sy)) < 1e-13


def test_depolarizing_scaling_and_max_mixing():
    f = random_psd_field(G, seed=7)
    p = 0.37
    out = apply_channel(f, channel_depolarizing(G, constant(p)), renormalize=False)
    assert np.allclose(_stokes_at(out), (1 - p) * _stokes_at(f), atol=1e-12)
    full = apply_channel(f, channel_depolarizing(G, constant(1.0)))
    lit = full.mask
    assert np.max(np.abs(full.data[lit] - 0.5 * np.eye(2))) < 1e-12


def test_amplitude_damping_matrix_form():
    f = random_psd_field(G, seed=8)
    p = 0.42
    out = apply_channel(f, channel_amplitude_damping(G, constant(p)), renormalize=False)
    r = f.data
    want = np.empty_like(r)
    want[..., 0, 0] = r[..., 0, 0] + p * r[..., 1, 1]
    want[..., 0, 1] = math.sqrt(1 - p) * r[..., 0, 1]
    want[..., 1, 0] = math.sqrt(1 - p) * r[..., 1, 0]
    want[..., 1, 1] = (1 - p) * r[..., 1, 1]
    assert np.max(np.abs(out.data - want)) < 1e-13


def test_phase_damping_offdiagonal_scaling():
    f = random_psd_field(G, seed=9)
    p = 0.6
    out = apply_channel(f, channel_phase_damping(G, constant(p)), renormalize=False)
    assert np.max(np.abs(out.data[..., 0, 0] - f.data[..., 0, 0])) < 1e-13
    assert np.max(np.abs(out.data[..., 1, 1] - f.data[..., 1, 1])) < 1e-13
    assert np.max(np.abs(out.data[..., 0, 1] - math.sqrt(1 - p) * f.data[..., 0, 1])) < 1e-13


@pytest.mark.parametrize("build", [channel_bit_flip, channel_phase_flip,
                                   channel_depolarizing, channel_amplitude_damping,
                                   channel_phase_damping])
def test_probability_families_trace_preserving_and_range(build):
    rep = verify_cptp(build(G, gauss_cos(0.5, 0.3, 2)))
    assert rep.classification == "trace-preserving"
    with pytest.raises(ChannelError):
        build(G, constant(1.2))
    with pytest.raises(ChannelError):
        build(G, constant(-0.1))


def test_outputs_stay_psd():
    f = random_psd_field(G, seed=10)
    for ch in (channel_bit_flip(G, gauss_cos(0.5, 0.3, 2)),
               channel_amplitude_damping(G, constant(0.7)),
               channel_diattenuator(G, constant(0.4), constant(0.1),
                                    constant(0.5), constant(0.9))):
        out = apply_channel(f, ch)
        herm = out.rho.hermitian_residual()
        assert herm < 1e-12
        ev = np.linalg.eigvalsh(out.data)
        assert ev.min() > -1e-10


def test_apply_channel_linear_before_renormalization():
    f1, f2 = random_psd_field(G, seed=11), random_psd_field(G, seed=12)
    ch = channel_amplitude_damping(G, gauss_cos(0.4, 0.2, 1))
    a, b = 0.3, 0.7
    from skynoise.grid import ComplexMatrixField
    from skynoise.modes import LocalDensityField
    mix = LocalDensityField(G, ComplexMatrixField(G, a * f1.data + b * f2.data),
                            f1.mask)
    lhs = apply_channel(mix, ch, renormalize=False).data
    rhs = a * apply_channel(f1, ch, renormalize=False).data \
        + b * apply_channel(f2, ch, renormalize=False).data
    scale = np.max(np.abs(rhs))
    assert np.max(np.abs(lhs - rhs)) < 1e-12 * scale


def test_convex_combine_single_identity():
    ch = channel_bit_flip(G, constant(0.3))
    combo = convex_combine([ch], [1.0])
    f = random_psd_field(G, seed=13)
    assert np.max(np.abs(apply_channel(f, combo, renormalize=False).data
                         - apply_channel(f, ch, renormalize=False).data)) == 0.0


def test_convex_combo_equals_half_probability_flip():
    ident = channel_bit_flip(G, constant(1.0), name="id")
    swap = channel_bit_flip(G, constant(0.0), name="swap")
    combo = convex_combine([ident, swap], [0.5, 0.5])
    direct = channel_bit_flip(G, constant(0.5))
    f = random_psd_field(G, seed=14)
    a = apply_channel(f, combo, renormalize=False).data
    b = apply_channel(f, direct, renormalize=False).data
    assert np.max(np.abs(a - b)) < 1e-13
    assert verify_cptp(combo).classification == "trace-preserving"


def test_convex_combine_weight_errors():
    ch = channel_bit_flip(G, constant(0.3))
    with pytest.raises(ChannelError):
        convex_combine([ch, ch], [0.6, 0.5])
    with pytest.raises(ChannelError):
        convex_combine([ch, ch], [1.5, -0.5])
    with pytest.warns(UserWarning, match="four"):
        convex_combine([ch] * 5, [0.2] * 5)


def test_invalid_completeness_detected():
    bad = KrausChannel("bad", G, ((1.0, (_field(
        G, np.broadcast_to(math.sqrt(1.3) * np.eye(2), G.shape + (2, 2))),)),), False)
    rep = verify_cptp(bad)
    assert rep.classification == "invalid"
    assert rep.max_psd_defect < -0.29


def test_homotopy_endpoints_and_midpoint():
    profs = {"theta": gauss_cos(0, 1.0, 2), "psi": gauss_cos(0, 1.0, 1),
             "q": constant(0.36), "r": constant(0.5)}
    ch0 = homotopy_channel("diattenuator", G, profs, 0.0)
    f = random_psd_field(G, seed=15)
    assert np.max(np.abs(apply_channel(f, ch0, renormalize=False).data - f.data)) < 1e-14
    ch1 = homotopy_channel("diattenuator", G, profs, 1.0)
    direct = channel_diattenuator(G, profs["theta"], profs["psi"],
                                  profs["q"], profs["r"])
    assert np.max(np.abs(apply_channel(f, ch1, renormalize=False).data
                         - apply_channel(f, direct, renormalize=False).data)) < 1e-14
    # q_t = (1-t) + t q = 0.68 at t = 1/2; theta_t = 0 on the axis pixels
    ch_half = homotopy_channel("diattenuator", G,
                               {"theta": constant(0.0), "psi": constant(0.0),
                                "q": constant(0.36), "r": constant(0.36)}, 0.5)
    K = ch_half.terms[0][1][0].data[0, 0]
    assert np.allclose(K, math.sqrt(0.68) * np.eye(2), atol=1e-14)
    with pytest.raises(ChannelError):
        homotopy_channel("diattenuator", G, profs, 1.3)
    with pytest.raises(ChannelError):
        homotopy_channel("bit_flip", G, profs, 0.5)


def test_amplitude_damping_winding_collapse_closed_form(grid256, state10_256):
    # At p = 1/2 the damped (1,0) state has the exact normalized Stokes
    # field (cos phi, -sin phi, rho)/sqrt(1+rho^2): a single-cover of the
    # northern hemisphere only, so the winding integral is 1/2, and for
    # p > 1/2 the image ellipsoid no longer encloses the origin so the
    # winding vanishes.  This pins the sweep behavior near p = 1/2.
    g = grid256
    ch = channel_amplitude_damping(g, constant(0.5))
    u = unit_stokes_of(apply_channel(state10_256, ch))
    rho, phi = g.polar()
    sel = (rho > 0.2) & (rho < 4.0)
    want = (np.cos(phi), -np.sin(phi), rho) / np.sqrt(1 + rho**2)
    for got, ref in zip(u.components(), want):
        assert np.max(np.abs(got - ref)[sel]) < 1e-12
    # half-cover integral converges to 1/2 from below (equatorial vortex
    # at the origin is the resolution-limited part)
    assert skyrmion_number(u).n == pytest.approx(0.5, abs=0.05)
    ch75 = channel_amplitude_damping(g, constant(0.75))
    n75 = skyrmion_number(unit_stokes_of(apply_channel(state10_256, ch75))).n
    assert abs(n75) < 0.05


def test_dark_pixels_marked_and_zeroed():
    g = make_grid(32, 32, 3.0)
    st = build_state(StateSpec(1, 0), g)
    from skynoise.profiles import CutoffRamp
    ch = channel_depolarizing(g, CutoffRamp(p0=0.1, a=1.5))
    out = apply_channel(st, ch)
    # trace is preserved, so no dark pixels from the trace floor
    assert out.mask.all()
    u = unit_stokes_of(out)
    rho, _ = g.polar()
    assert not u.mask[rho >= 1.5].any()
    assert u.mask[rho < 1.2].all()


def test_grid_mismatch_rejected():
    other = make_grid(16, 16, 2.0)
    ch = channel_bit_flip(other, constant(0.5))
    f = random_psd_field(G, seed=16)
    from skynoise.grid import GridError
    with pytest.raises(GridError):
        apply_channel(f, ch)
