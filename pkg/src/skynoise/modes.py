"""Laguerre-Gaussian modes and the local polarization density-matrix field.

The two-mode state assigns the l1 mode to |H> and the l2 mode (times a
relative phase) to |V>; basis ordering is (H, V) everywhere.  All
lengths are in units of the Gaussian width, so w0 = 1 internally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import ComplexMatrixField, Grid

MAX_OAM = 30  # factorial overflow guard; |l| <= 12 in practice


class ModeError(ValueError):
    pass


@dataclass(frozen=True)
class StateSpec:
    """OAM charges and relative phase of the two-mode polarization state."""

    l1: int
    l2: int
    alpha: float = 0.0

    def __post_init__(self):
        for l in (self.l1, self.l2):
            if abs(int(l)) > MAX_OAM:
                raise ModeError(f"|l| > {MAX_OAM} not supported, got {l}")
        object.__setattr__(self, "alpha", float(self.alpha) % (2 * math.pi))

    @property
    def target_winding(self) -> int:
        return self.l1 - self.l2

    @property
    def is_product_like(self) -> bool:
        # equal charges give a constant polarization map (winding zero)
        return self.l1 == self.l2


def lg_mode(l: int, w0: float, rho, phi):
    """p=0 Laguerre-Gaussian amplitude at (rho, phi).

    Returns sqrt(2/(pi |l|!)) / w0 * (sqrt(2) rho / w0)^|l|
    * exp(-rho^2/w0^2) * exp(i l phi).  The radial Laguerre factor is 1
    for p = 0.  The factorial is evaluated in log space.
    """
    l = int(l)
    if abs(l) > MAX_OAM:
        raise ModeError(f"|l| > {MAX_OAM} not supported, got {l}")
    rho = np.asarray(rho, dtype=np.float64)
    if np.any(rho < 0):
        raise ModeError("rho must be non-negative")
    norm = math.sqrt(2.0 / math.pi) * math.exp(-0.5 * math.lgamma(abs(l) + 1)) / w0
    radial = norm * (math.sqrt(2.0) * rho / w0) ** abs(l) * np.exp(-(rho / w0) ** 2)
    return radial * np.exp(1j * l * np.asarray(phi))


@dataclass(frozen=True)
class LocalDensityField:
    """2x2 Hermitian PSD matrix per pixel plus a dark-pixel mask.

    ``mask`` is True where the pixel carries usable signal; dark pixels
    (trace below the channel floor) have an undefined polarization state.
    Traces are not globally normalized; pointwise normalization happens
    in the channel layer.
    """

    grid: Grid
    rho: ComplexMatrixField
    mask: np.ndarray

    def __post_init__(self):
        mask = np.asarray(self.mask, dtype=bool)
        if mask.shape != self.grid.shape:
            raise ModeError(f"mask shape {mask.shape} != grid shape {self.grid.shape}")
        mask.setflags(write=False)
        object.__setattr__(self, "mask", mask)

    @property
    def data(self) -> np.ndarray:
        return self.rho.data

    def trace(self) -> np.ndarray:
        return np.real(self.data[..., 0, 0] + self.data[..., 1, 1])

    def rank1_residual(self) -> float:
        """Max |det(rho)| / tr(rho)^2 over lit pixels; ~0 for pure states."""
        det = (self.data[..., 0, 0] * self.data[..., 1, 1]
               - self.data[..., 0, 1] * self.data[..., 1, 0])
        tr = self.trace()
        with np.errstate(invalid="ignore", divide="ignore"):
            r = np.abs(det) / np.maximum(tr, 1e-300) ** 2
        return float(np.max(np.where(self.mask, r, 0.0)))


def build_state(spec: StateSpec, grid: Grid) -> LocalDensityField:
    """Rank-1 local density matrix rho = v v^dagger of the two-mode state.

    v = (u_{l1}(rho,phi), e^{i alpha} u_{l2}(rho,phi)) in (H, V) ordering.
    No global normalization is applied.
    """
    rho_r, phi = grid.polar()
    u1 = lg_mode(spec.l1, 1.0, rho_r, phi)
    u2 = lg_mode(spec.l2, 1.0, rho_r, phi) * np.exp(1j * spec.alpha)
    rho = np.empty(grid.shape + (2, 2), dtype=np.complex128)
    rho[..., 0, 0] = np.abs(u1) ** 2
    rho[..., 0, 1] = u1 * np.conj(u2)
    rho[..., 1, 0] = np.conj(rho[..., 0, 1])
    rho[..., 1, 1] = np.abs(u2) ** 2
    mask = np.ones(grid.shape, dtype=bool)
    return LocalDensityField(grid, ComplexMatrixField(grid, rho), mask)
