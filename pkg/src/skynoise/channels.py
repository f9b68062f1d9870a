"""Position-dependent Kraus channels on the polarization qubit.

A channel is a weighted list of Kraus operator groups; it acts on a
local density field pointwise as

    rho' = sum_i w_i sum_l K_l^{(i)} rho K_l^{(i) dagger}

followed (optionally) by pointwise trace renormalization.  Profiles are
evaluated once onto the grid at build time, so a constructed channel is
pure data and freely shareable.

Convention note: the bit-flip family keeps the source convention where
E0 carries sqrt(p), i.e. p = 1 is noiseless and p = 0 swaps H and V.
All damping-type families use p = 0 as noiseless.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .grid import ComplexMatrixField, Grid, GridError
from .modes import LocalDensityField
from .profiles import NoiseProfile

# Relative trace floor: pixels whose trace falls below floor * max-trace
# are marked dark.  Double precision keeps LG tails exact far below any
# physical scale, so the floor only has to catch genuinely extinguished
# pixels (e.g. a fully saturated depolarizer), not rounding noise.
TRACE_FLOOR = 1e-60

_SX = np.array([[0, 1], [1, 0]], dtype=np.complex128)
_SY = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
_SZ = np.array([[1, 0], [0, -1]], dtype=np.complex128)


class ChannelError(ValueError):
    pass


@dataclass(frozen=True)
class KrausChannel:
    """Weighted Kraus groups: terms = [(weight, [ComplexMatrixField, ...]), ...]."""

    name: str
    grid: Grid
    terms: tuple
    trace_preserving: bool

    def __post_init__(self):
        if len(self.terms) > 1:
            total = sum(w for w, _ in self.terms)
            if abs(total - 1.0) > 1e-12:
                raise ChannelError(f"group weights sum to {total}, expected 1")

    def operator_sum(self) -> np.ndarray:
        """Pointwise sum_i w_i sum_l K^dagger K, shape (ny, nx, 2, 2)."""
        acc = np.zeros(self.grid.shape + (2, 2), dtype=np.complex128)
        for w, ops in self.terms:
            for K in ops:
                Kd = np.conj(np.swapaxes(K.data, -1, -2))
                acc += w * (Kd @ K.data)
        return acc


def _field(grid, arr) -> ComplexMatrixField:
    return ComplexMatrixField(grid, np.ascontiguousarray(arr, dtype=np.complex128))


def _scaled_const(grid, mat, scale) -> ComplexMatrixField:
    out = scale[..., None, None] * np.broadcast_to(mat, grid.shape + (2, 2))
    return _field(grid, out)


def _check_range(name, values, lo, hi, lo_open=False):
    vmin, vmax = float(np.min(values)), float(np.max(values))
    bad_lo = vmin <= lo if lo_open else vmin < lo - 1e-12
    if bad_lo or vmax > hi + 1e-12:
        raise ChannelError(
            f"{name} profile escapes [{lo}, {hi}]: range [{vmin:.6g}, {vmax:.6g}]"
        )


def channel_retarder(grid: Grid, theta: NoiseProfile, varphi: NoiseProfile,
                     psi: NoiseProfile, name: str = "retarder") -> KrausChannel:
    """Single unitary Kraus term: the retarder Jones matrix per pixel."""
    rho, phi = grid.polar()
    th, vp, ps = theta.sample(rho, phi), varphi.sample(rho, phi), psi.sample(rho, phi)
    c, s = np.cos(th / 2), np.sin(th / 2)
    J = np.empty(grid.shape + (2, 2), dtype=np.complex128)
    J[..., 0, 0] = np.exp(-0.5j * (vp + ps)) * c
    J[..., 0, 1] = np.exp(-0.5j * (vp - ps)) * s
    J[..., 1, 0] = -np.exp(0.5j * (vp - ps)) * s
    J[..., 1, 1] = np.exp(0.5j * (vp + ps)) * c
    return KrausChannel(name, grid, ((1.0, (_field(grid, J),)),), True)


def channel_diattenuator(grid: Grid, theta: NoiseProfile, psi: NoiseProfile,
                         q: NoiseProfile, r: NoiseProfile,
                         name: str = "diattenuator") -> KrausChannel:
    """Single Hermitian Kraus term; trace-decreasing for q, r < 1."""
    rho, phi = grid.polar()
    th, ps = theta.sample(rho, phi), psi.sample(rho, phi)
    qv, rv = q.sample(rho, phi), r.sample(rho, phi)
    _check_range("q", qv, 0.0, 1.0, lo_open=True)
    _check_range("r", rv, 0.0, 1.0, lo_open=True)
    sq, sr = np.sqrt(qv), np.sqrt(rv)
    ct, st = np.cos(th), np.sin(th)
    J = np.empty(grid.shape + (2, 2), dtype=np.complex128)
    J[..., 0, 0] = 0.5 * (sq + sr + (sq - sr) * ct)
    J[..., 0, 1] = 0.5 * np.exp(1j * ps) * (sq - sr) * st
    J[..., 1, 0] = 0.5 * np.exp(-1j * ps) * (sq - sr) * st
    J[..., 1, 1] = 0.5 * (sq + sr - (sq - sr) * ct)
    return KrausChannel(name, grid, ((1.0, (_field(grid, J),)),), False)


def channel_bit_flip(grid: Grid, p: NoiseProfile, name: str = "bit_flip") -> KrausChannel:
    """E0 = sqrt(p) I, E1 = sqrt(1-p) sigma_x (p = 1 noiseless)."""
    pv = p.on_grid(grid)
    _check_range("p", pv, 0.0, 1.0)
    pv = np.clip(pv, 0.0, 1.0)
    ops = (_scaled_const(grid, np.eye(2), np.sqrt(pv)),
           _scaled_const(grid, _SX, np.sqrt(1 - pv)))
    return KrausChannel(name, grid, ((1.0, ops),), True)


def channel_phase_flip(grid: Grid, p: NoiseProfile, name: str = "phase_flip") -> KrausChannel:
    """E0 = sqrt(p) I, E1 = sqrt(1-p) sigma_z (p = 1 noiseless)."""
    pv = p.on_grid(grid)
    _check_range("p", pv, 0.0, 1.0)
    pv = np.clip(pv, 0.0, 1.0)
    ops = (_scaled_const(grid, np.eye(2), np.sqrt(pv)),
           _scaled_const(grid, _SZ, np.sqrt(1 - pv)))
    return KrausChannel(name, grid, ((1.0, ops),), True)


def channel_depolarizing(grid: Grid, p: NoiseProfile,
                         name: str = "depolarizing") -> KrausChannel:
    """Four-term Kraus form of rho -> (p/2) tr(rho) I + (1-p) rho.

    Kraus set {sqrt(1-3p/4) I, sqrt(p/4) sigma_x, sqrt(p/4) sigma_y,
    sqrt(p/4) sigma_z}; identical to the affine form via
    sum_k sigma_k rho sigma_k = 2 tr(rho) I - rho.
    """
    pv = p.on_grid(grid)
    _check_range("p", pv, 0.0, 1.0)
    pv = np.clip(pv, 0.0, 1.0)
    quarter = np.sqrt(pv / 4)
    ops = (_scaled_const(grid, np.eye(2), np.sqrt(1 - 0.75 * pv)),
           _scaled_const(grid, _SX, quarter),
           _scaled_const(grid, _SY, quarter),
           _scaled_const(grid, _SZ, quarter))
    return KrausChannel(name, grid, ((1.0, ops),), True)


def channel_amplitude_damping(grid: Grid, p: NoiseProfile,
                              name: str = "amplitude_damping") -> KrausChannel:
    """E0 = diag(1, sqrt(1-p)), E1 = [[0, sqrt(p)], [0, 0]] (p = 0 noiseless)."""
    pv = p.on_grid(grid)
    _check_range("p", pv, 0.0, 1.0)
    pv = np.clip(pv, 0.0, 1.0)
    E0 = np.zeros(grid.shape + (2, 2), dtype=np.complex128)
    E1 = np.zeros_like(E0)
    E0[..., 0, 0] = 1.0
    E0[..., 1, 1] = np.sqrt(1 - pv)
    E1[..., 0, 1] = np.sqrt(pv)
    return KrausChannel(name, grid, ((1.0, (_field(grid, E0), _field(grid, E1))),), True)


def channel_phase_damping(grid: Grid, p: NoiseProfile,
                          name: str = "phase_damping") -> KrausChannel:
    """E0 = diag(1, sqrt(1-p)), E1 = diag(0, sqrt(p)) (p = 0 noiseless)."""
    pv = p.on_grid(grid)
    _check_range("p", pv, 0.0, 1.0)
    pv = np.clip(pv, 0.0, 1.0)
    E0 = np.zeros(grid.shape + (2, 2), dtype=np.complex128)
    E1 = np.zeros_like(E0)
    E0[..., 0, 0] = 1.0
    E0[..., 1, 1] = np.sqrt(1 - pv)
    E1[..., 1, 1] = np.sqrt(pv)
    return KrausChannel(name, grid, ((1.0, (_field(grid, E0), _field(grid, E1))),), True)


CONSTANT_FAMILIES = {
    "bit_flip": channel_bit_flip,
    "phase_flip": channel_phase_flip,
    "depolarizing": channel_depolarizing,
    "amplitude_damping": channel_amplitude_damping,
    "phase_damping": channel_phase_damping,
}


def convex_combine(channels, weights, name: str = "convex") -> KrausChannel:
    """Convex mixture of channels: concatenates weight-scaled Kraus groups.

    Weights must be non-negative and sum to 1.  More than four weights is
    allowed but flagged, since four always suffice for a qubit Mueller
    matrix.
    """
    weights = [float(w) for w in weights]
    if len(weights) != len(channels):
        raise ChannelError("one weight per channel required")
    if any(w < 0 for w in weights):
        raise ChannelError("weights must be non-negative")
    if abs(sum(weights) - 1.0) > 1e-12:
        raise ChannelError(f"weights sum to {sum(weights)}, expected 1")
    if len(weights) > 4:
        warnings.warn("more than four mixture weights are never needed", stacklevel=2)
    grid = channels[0].grid
    terms = []
    for ch, w in zip(channels, weights):
        if ch.grid != grid:
            raise GridError("channels live on different grids")
        for gw, ops in ch.terms:
            terms.append((w * gw, ops))
    tp = all(ch.trace_preserving for ch in channels)
    return KrausChannel(name, grid, tuple(terms), tp)


def homotopy_channel(family: str, grid: Grid, profiles: dict, t: float,
                     name: str = None) -> KrausChannel:
    """Channel at parameter t of the deformation from identity (t=0)
    to the full channel (t=1).

    Retarder: all three angles scale as t * angle(x, y).
    Diattenuator: angles scale as t * angle; transmittances interpolate
    as q_t = (1-t) + t*q (never touching the sqrt branch point since
    q > 0).
    """
    if not 0.0 <= t <= 1.0:
        raise ChannelError(f"t must be in [0, 1], got {t}")
    name = name or f"{family}_t{t:g}"
    rho, phi = grid.polar()

    def scaled(profile):
        vals = t * profile.sample(rho, phi)
        return _Sampled(vals)

    if family == "retarder":
        return channel_retarder(grid, scaled(profiles["theta"]),
                                scaled(profiles["varphi"]), scaled(profiles["psi"]),
                                name=name)
    if family == "diattenuator":
        def interp(profile):
            vals = profile.sample(rho, phi)
            return _Sampled((1.0 - t) + t * vals)
        return channel_diattenuator(grid, scaled(profiles["theta"]),
                                    scaled(profiles["psi"]),
                                    interp(profiles["q"]), interp(profiles["r"]),
                                    name=name)
    raise ChannelError(f"homotopy only defined for retarder/diattenuator, got {family}")


class _Sampled:
    """Pre-evaluated profile stand-in (ignores the coordinates it is given)."""

    def __init__(self, values):
        self.values = values

    def sample(self, rho, phi):
        return self.values

    def on_grid(self, grid):
        return self.values


def apply_channel(field: LocalDensityField, ch: KrausChannel,
                  renormalize: bool = True,
                  trace_floor: float = TRACE_FLOOR) -> LocalDensityField:
    """Pointwise operator sum, then optional trace renormalization.

    Pixels whose output trace falls below ``trace_floor`` times the field
    maximum are marked dark and left unnormalized; downstream consumers
    treat them as carrying no polarization information.  The output is
    re-symmetrized to kill accumulated Hermiticity rounding.
    """
    if field.grid != ch.grid:
        raise GridError("state and channel grids differ")
    rho = field.data
    out = np.zeros_like(rho)
    for w, ops in ch.terms:
        for K in ops:
            Kd = np.conj(np.swapaxes(K.data, -1, -2))
            out += w * (K.data @ rho @ Kd)
    out = 0.5 * (out + np.conj(np.swapaxes(out, -1, -2)))
    tr = np.real(out[..., 0, 0] + out[..., 1, 1])
    mask = field.mask & (tr > trace_floor * max(float(tr.max()), 0.0))
    if renormalize:
        safe = np.where(mask, tr, 1.0)
        out = out / safe[..., None, None]
        out[~mask] = 0.0
    return LocalDensityField(field.grid, ComplexMatrixField(field.grid, out), mask)


@dataclass(frozen=True)
class CptpReport:
    classification: str      # trace-preserving | trace-decreasing | invalid
    max_identity_deviation: float
    max_psd_defect: float    # most negative eigenvalue of 1 - sum K^dagger K

    @property
    def ok(self) -> bool:
        return self.classification != "invalid"


def verify_cptp(ch: KrausChannel, tol: float = 1e-10) -> CptpReport:
    """Classify the channel by its completeness sum.

    trace-preserving: sum_i w_i sum_l K^dagger K = 1 within tol everywhere;
    trace-decreasing: the defect 1 - sum is PSD within tol everywhere;
    invalid: the sum exceeds the identity somewhere.
    """
    S = ch.operator_sum()
    dev = S - np.eye(2)
    max_dev = float(np.max(np.abs(dev)))
    if max_dev <= tol:
        return CptpReport("trace-preserving", max_dev, 0.0)
    defect = np.eye(2) - S
    defect = 0.5 * (defect + np.conj(np.swapaxes(defect, -1, -2)))
    ev = np.linalg.eigvalsh(defect)
    min_ev = float(ev.min())
    if min_ev >= -tol:
        return CptpReport("trace-decreasing", max_dev, min_ev)
    return CptpReport("invalid", max_dev, min_ev)
