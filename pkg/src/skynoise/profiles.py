"""Smooth scalar parameter profiles over the plane.

Three families cover every channel parameterization used here:

  constant             value everywhere
  gauss_cos            (offset + amp*cos(n*phi)) * exp(-decay*rho^2)
  one_minus_gauss_cos  1 - gauss_cos(...)   (transmittance dips)

Bounds are not baked into the profile; each channel builder checks the
evaluated field against its own legal range.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Grid

_FAMILIES = ("constant", "gauss_cos", "one_minus_gauss_cos")


class ProfileError(ValueError):
    pass


@dataclass(frozen=True)
class NoiseProfile:
    family: str
    value: float = 0.0      # constant family
    offset: float = 0.0     # gauss_cos families
    amp: float = 0.0
    n: int = 0
    decay: float = 1.0

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ProfileError(f"unknown profile family {self.family!r}")
        if self.n != int(self.n):
            raise ProfileError("angular frequency n must be an integer")
        object.__setattr__(self, "n", int(self.n))

    def sample(self, rho, phi) -> np.ndarray:
        rho = np.asarray(rho, dtype=np.float64)
        if self.family == "constant":
            return np.full(rho.shape, float(self.value))
        base = (self.offset + self.amp * np.cos(self.n * np.asarray(phi))) \
            * np.exp(-self.decay * rho ** 2)
        if self.family == "one_minus_gauss_cos":
            return 1.0 - base
        return base

    def on_grid(self, grid: Grid) -> np.ndarray:
        rho, phi = grid.polar()
        return self.sample(rho, phi)


def constant(value: float) -> NoiseProfile:
    return NoiseProfile("constant", value=float(value))


def gauss_cos(offset: float, amp: float, n: int, decay: float = 1.0) -> NoiseProfile:
    return NoiseProfile("gauss_cos", offset=offset, amp=amp, n=n, decay=decay)


def one_minus_gauss_cos(offset: float, amp: float, n: int, decay: float = 1.0) -> NoiseProfile:
    return NoiseProfile("one_minus_gauss_cos", offset=offset, amp=amp, n=n, decay=decay)


@dataclass(frozen=True)
class CutoffRamp:
    """Depolarization strength ramping smoothly to saturation.

    p(rho) = 1 - (1 - p0) * cos^2(pi rho / (2 a)) inside rho < a and
    exactly 1 beyond, so the signal is fully extinguished outside the
    disk of radius a regardless of any magnitude floor.
    """

    p0: float = 0.1
    a: float = 1.6

    def __post_init__(self):
        if not 0.0 <= self.p0 < 1.0:
            raise ProfileError(f"p0 must be in [0, 1), got {self.p0}")
        if self.a <= 0:
            raise ProfileError(f"cutoff radius must be positive, got {self.a}")

    def sample(self, rho, phi=None) -> np.ndarray:
        rho = np.asarray(rho, dtype=np.float64)
        ramp = 1.0 - (1.0 - self.p0) * np.cos(np.pi * rho / (2.0 * self.a)) ** 2
        return np.where(rho < self.a, ramp, 1.0)

    def on_grid(self, grid: Grid) -> np.ndarray:
        rho, _ = grid.polar()
        return self.sample(rho)


def profile_from_dict(d) -> NoiseProfile:
    """Profile from a config mapping, e.g. {family: gauss_cos, offset: .5, ...}."""
    if isinstance(d, (int, float)):
        return constant(float(d))
    kwargs = dict(d)
    family = kwargs.pop("family")
    if family == "cutoff_ramp":
        return CutoffRamp(**kwargs)
    return NoiseProfile(family, **kwargs)
