"""Stokes fields, normalization, and the winding-number integral.

Components here are Pauli-ordered: (sx, sy, sz) = Tr(rho sigma_{1,2,3}),
matching the map onto the polarization sphere whose degree is computed.
The polarimetry module's (S0..S3) labeling is reached only through its
adapter functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import Grid, GridError, ScalarField, integrate
from .modes import LocalDensityField

# Relative magnitude floor below which a normalized Stokes direction is
# considered undefined.  See channels.TRACE_FLOOR for why this is tiny:
# LG tails stay numerically exact far below any sane cutoff, and a loose
# floor silently shrinks the integration window of slow 1/rho tails.
NORM_FLOOR = 1e-60

# Local guard: a pixel whose degree of polarization |S|/s0 sits at the
# rounding level carries no direction information (e.g. the exactly
# saturated depolarizer leaves ~1e-17 cancellation residue).
DOP_EPS = 1e-12

_SNAP = 8 * np.finfo(np.float64).eps  # |norm-1| below this: treat as exactly 1


class TopologyError(ValueError):
    pass


@dataclass(frozen=True)
class StokesField:
    """Unnormalized Stokes components per pixel (s0 is the local trace)."""

    grid: Grid
    s0: np.ndarray
    sx: np.ndarray
    sy: np.ndarray
    sz: np.ndarray
    mask: np.ndarray

    def magnitude(self) -> np.ndarray:
        return np.sqrt(self.sx ** 2 + self.sy ** 2 + self.sz ** 2)


@dataclass(frozen=True)
class UnitStokesField:
    """Unit-normalized Stokes direction; mask flags pixels where defined."""

    grid: Grid
    ux: np.ndarray
    uy: np.ndarray
    uz: np.ndarray
    mask: np.ndarray

    def components(self):
        return self.ux, self.uy, self.uz

    @property
    def valid_fraction(self) -> float:
        return float(np.count_nonzero(self.mask)) / self.mask.size


@dataclass(frozen=True)
class SkyrmionResult:
    n: float
    density: ScalarField
    valid_fraction: float


def stokes_from_density(field: LocalDensityField, imag_tol: float = 1e-10) -> StokesField:
    """Pauli traces of the 2x2 field: sx = 2 Re rho_01, sy = Tr(rho sigma_y),
    sz = rho_00 - rho_11, s0 = tr(rho).

    An imaginary residue on the diagonal above ``imag_tol`` (relative to
    the field scale) signals a corrupted density matrix.
    """
    rho = field.data
    diag_imag = float(np.max(np.abs(np.imag(rho[..., 0, 0]))) +
                      np.max(np.abs(np.imag(rho[..., 1, 1]))))
    scale = max(float(np.max(np.abs(rho))), 1e-300)
    if diag_imag > imag_tol * scale:
        raise TopologyError(f"imaginary diagonal residue {diag_imag:.3e}")
    sx = 2.0 * np.real(rho[..., 0, 1])
    sy = -2.0 * np.imag(rho[..., 0, 1])  # equals 2 Im rho_10
    sz = np.real(rho[..., 0, 0] - rho[..., 1, 1])
    s0 = np.real(rho[..., 0, 0] + rho[..., 1, 1])
    return StokesField(field.grid, s0, sx, sy, sz, field.mask.copy())


def normalize_stokes(S: StokesField, floor: float = NORM_FLOOR) -> UnitStokesField:
    """Divide by |S| where it exceeds floor * max|S|; mark the rest invalid.

    Pixels whose degree of polarization |S|/s0 is at rounding level are
    also invalid regardless of the floor.  Division is skipped when the
    norm is already 1 to rounding accuracy, which makes repeated
    normalization bitwise idempotent.
    """
    norm = S.magnitude()
    peak = float(norm.max()) if norm.size else 0.0
    valid = (S.mask & (norm > floor * peak) & (norm > 0.0)
             & (norm > DOP_EPS * np.abs(S.s0)))
    inv = np.ones_like(norm)
    np.divide(1.0, norm, out=inv, where=valid)
    inv[np.abs(norm - 1.0) <= _SNAP] = 1.0
    ux = np.where(valid, S.sx * inv, 0.0)
    uy = np.where(valid, S.sy * inv, 0.0)
    uz = np.where(valid, S.sz * inv, 0.0)
    return UnitStokesField(S.grid, ux, uy, uz, valid)


def _central_dx(f: np.ndarray, dx: float) -> np.ndarray:
    g = np.zeros_like(f)
    g[:, 1:-1] = (f[:, 2:] - f[:, :-2]) / (2.0 * dx)
    return g


def _central_dy(f: np.ndarray, dy: float) -> np.ndarray:
    g = np.zeros_like(f)
    g[1:-1, :] = (f[2:, :] - f[:-2, :]) / (2.0 * dy)
    return g


def _grow_invalid(bad: np.ndarray) -> np.ndarray:
    """Invalid set plus its 4-neighborhood (stencil contamination)."""
    g = bad.copy()
    g[1:, :] |= bad[:-1, :]
    g[:-1, :] |= bad[1:, :]
    g[:, 1:] |= bad[:, :-1]
    g[:, :-1] |= bad[:, 1:]
    return g


def skyrmion_density(u: UnitStokesField) -> ScalarField:
    """Winding density eps_pqr u_p (d u_q / dx) (d u_r / dy).

    Second-order central differences at interior pixels; the density is
    zeroed at invalid pixels, at pixels whose stencil touches an invalid
    pixel, and on the outermost pixel ring.  A field with no valid pixels
    (fully extinguished signal) has identically zero density.
    """
    if not u.mask.any():
        return ScalarField(u.grid, np.zeros(u.grid.shape))
    dx, dy = u.grid.dx, u.grid.dy
    ux, uy, uz = u.components()
    dxx = (_central_dx(ux, dx), _central_dx(uy, dx), _central_dx(uz, dx))
    dyy = (_central_dy(ux, dy), _central_dy(uy, dy), _central_dy(uz, dy))
    dens = (ux * (dxx[1] * dyy[2] - dxx[2] * dyy[1])
            + uy * (dxx[2] * dyy[0] - dxx[0] * dyy[2])
            + uz * (dxx[0] * dyy[1] - dxx[1] * dyy[0]))
    dead = _grow_invalid(~u.mask)
    dens[dead] = 0.0
    dens[0, :] = dens[-1, :] = 0.0
    dens[:, 0] = dens[:, -1] = 0.0
    return ScalarField(u.grid, dens)


def skyrmion_number(u: UnitStokesField) -> SkyrmionResult:
    """N = (1/4 pi) * window integral of the winding density."""
    dens = skyrmion_density(u)
    n = integrate(dens) / (4.0 * math.pi)
    return SkyrmionResult(n, dens, u.valid_fraction)


def unit_stokes_of(field: LocalDensityField, floor: float = NORM_FLOOR) -> UnitStokesField:
    """Convenience: density field -> normalized Stokes directions."""
    return normalize_stokes(stokes_from_density(field), floor)


def _bilinear(u: UnitStokesField, xs: np.ndarray, ys: np.ndarray):
    """Sample components at arbitrary points; invalid when outside the
    window or when any stencil corner is invalid."""
    g = u.grid
    fx = (xs + g.extent) / g.dx
    fy = (ys + g.extent) / g.dy
    # snap to exact nodes so that sampling at grid points is lossless
    fx = np.where(np.abs(fx - np.rint(fx)) < 1e-9, np.rint(fx), fx)
    fy = np.where(np.abs(fy - np.rint(fy)) < 1e-9, np.rint(fy), fy)
    ok = (fx >= 0) & (fx <= g.nx - 1) & (fy >= 0) & (fy <= g.ny - 1)
    fx = np.clip(fx, 0, g.nx - 1)
    fy = np.clip(fy, 0, g.ny - 1)
    i0 = np.clip(np.floor(fx).astype(int), 0, g.nx - 2)
    j0 = np.clip(np.floor(fy).astype(int), 0, g.ny - 2)
    tx = fx - i0
    ty = fy - j0
    w00 = (1 - tx) * (1 - ty)
    w10 = tx * (1 - ty)
    w01 = (1 - tx) * ty
    w11 = tx * ty
    comps = []
    for c in u.components():
        comps.append(w00 * c[j0, i0] + w10 * c[j0, i0 + 1]
                     + w01 * c[j0 + 1, i0] + w11 * c[j0 + 1, i0 + 1])
    m = u.mask
    # only stencil corners that actually contribute must be valid
    ok &= ((w00 == 0) | m[j0, i0]) & ((w10 == 0) | m[j0, i0 + 1]) \
        & ((w01 == 0) | m[j0 + 1, i0]) & ((w11 == 0) | m[j0 + 1, i0 + 1])
    return comps, ok


@dataclass(frozen=True)
class PlaneWarp:
    """Orientation-preserving deformation of the plane for invariance checks."""

    kind: str                 # identity | radial_bump | shear
    amplitude: float = 0.0

    def apply(self, X, Y):
        if self.kind == "identity":
            return X, Y
        if self.kind == "radial_bump":
            # rho -> rho * (1 + a e^{-rho^2}); monotone for a <= 0.2-ish
            rho2 = X ** 2 + Y ** 2
            f = 1.0 + self.amplitude * np.exp(-rho2)
            return X * f, Y * f
        if self.kind == "shear":
            return X + self.amplitude * Y, Y
        raise TopologyError(f"unknown warp kind {self.kind!r}")

    def jacobian_positive(self) -> bool:
        if self.kind == "identity" or self.kind == "shear":
            return True
        if self.kind == "radial_bump":
            # d(rho f)/drho = 1 + a e^{-x}(1 - 2x), x = rho^2; minimum at
            # x = 3/2 gives 1 - 2 a e^{-3/2}
            return 1.0 - 2.0 * self.amplitude * math.exp(-1.5) > 0
        return False


def warp_invariance_check(u: UnitStokesField, warp: PlaneWarp):
    """Recompute N after resampling the field at warped coordinates.

    Resampling is bilinear per component followed by renormalization;
    pixels that land outside the window or touch invalid data are
    invalidated.  Returns (N_before, N_after).
    """
    if not warp.jacobian_positive():
        raise TopologyError("warp must have positive Jacobian")
    n_before = skyrmion_number(u).n
    X, Y = u.grid.meshgrid()
    Xw, Yw = warp.apply(X, Y)
    (wx, wy, wz), ok = _bilinear(u, Xw, Yw)
    S = StokesField(u.grid, np.ones_like(wx), wx, wy, wz, ok)
    u2 = normalize_stokes(S, floor=0.0)
    n_after = skyrmion_number(u2).n
    return n_before, n_after


def boundary_phi_dependence(u: UnitStokesField, ring_radius: float,
                            samples: int = 720) -> float:
    """Compactifiability diagnostic: max angular distance (radians)
    between ring samples and their mean direction.

    Small values mean the Stokes direction has lost its angular
    dependence at that radius, so the window can be closed into a
    sphere.  The ring must lie inside the grid.
    """
    if ring_radius <= 0 or ring_radius > u.grid.extent:
        raise TopologyError(
            f"ring radius {ring_radius} outside grid extent {u.grid.extent}")
    ang = np.linspace(-math.pi, math.pi, samples, endpoint=False)
    xs = ring_radius * np.cos(ang)
    ys = ring_radius * np.sin(ang)
    (vx, vy, vz), ok = _bilinear(u, xs, ys)
    if not ok.all():
        raise TopologyError("ring touches invalid pixels")
    vecs = np.stack([vx, vy, vz], axis=-1)
    vecs /= np.linalg.norm(vecs, axis=-1, keepdims=True)
    mean = vecs.mean(axis=0)
    mean /= np.linalg.norm(mean)
    dots = np.clip(vecs @ mean, -1.0, 1.0)
    return float(np.max(np.arccos(dots)))


def stokes_generic_form(k: int, rho, phi):
    """Reference unit-Stokes family with winding k and S_z from -1 (origin)
    to +1 (infinity): (2 sqrt(rho) sin(k phi), 2 sqrt(rho) cos(k phi),
    rho - 1) / (rho + 1)."""
    rho = np.asarray(rho, dtype=np.float64)
    if np.any(rho < 0):
        raise TopologyError("rho must be non-negative")
    phi = np.asarray(phi, dtype=np.float64)
    denom = rho + 1.0
    return (2.0 * np.sqrt(rho) * np.sin(k * phi) / denom,
            2.0 * np.sqrt(rho) * np.cos(k * phi) / denom,
            (rho - 1.0) / denom)
