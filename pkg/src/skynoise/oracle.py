"""Independent reference values for cross-checking the field pipeline.

Closed-form Stokes expressions for the (l1, l2) = (12, 1) state under
constant-p bit-flip, amplitude-damping and phase-damping noise, written
directly from the exact rational/surd coefficients (w0 = 1):

    raw(rho) = 4 sqrt(2/231) rho^13 e^{-2 rho^2} / (45 pi)
    sz terms combine 4 rho^2 e^{-2 rho^2} / pi (low charge) with
    8 rho^24 e^{-2 rho^2} / (467775 pi) (high charge); their difference
    is the familiar (467775 - 2 rho^22) display, kept split here to
    avoid catastrophic cancellation where one population dominates.

The source displays carry the opposite sign on S_y and S_z, which
corresponds to assigning the high-charge mode to V instead of H; here
the expressions are written in this package's (H, V) = (l1, l2)
ordering so that the noiseless limit of every family coincides with
``stokes_from_density`` of the freshly built state.  Both versions agree
on every quantity the sign pair cancels in (in particular the winding
number, since flipping S_y and S_z together is a proper rotation).

``brute_force_apply`` is a deliberately plain per-pixel loop with no
shared code or vectorization tricks, used as the independent side of the
channel-application equivalence tests.
"""

from __future__ import annotations

import math

import numpy as np

from .channels import KrausChannel
from .grid import ComplexMatrixField, GridError
from .modes import LocalDensityField

ORACLE_L1, ORACLE_L2 = 12, 1
_FAMILIES = ("bit_flip", "amp_damp", "phase_damp")


class OracleError(ValueError):
    pass


def _raw(rho):
    return 4.0 * math.sqrt(2.0 / 231.0) * rho ** 13 * np.exp(-2.0 * rho ** 2) \
        / (45.0 * math.pi)


def _pop_low(rho):
    # low-charge population term: 4 rho^2 e^{-2 rho^2} / pi
    return 4.0 * rho ** 2 * np.exp(-2.0 * rho ** 2) / math.pi


def _pop_high(rho):
    # high-charge population term: 8 rho^24 e^{-2 rho^2} / (467775 pi)
    return 8.0 * rho ** 24 * np.exp(-2.0 * rho ** 2) / (467775.0 * math.pi)


def analytic_stokes(family: str, p: float, rho, phi):
    """Unnormalized (sx, sy, sz) of the noisy (12, 1) state at (rho, phi).

    Noiseless parameter per family convention: bit_flip at p = 1,
    amp_damp and phase_damp at p = 0.
    """
    if family not in _FAMILIES:
        raise OracleError(f"unknown family {family!r}; expected one of {_FAMILIES}")
    if not 0.0 <= p <= 1.0:
        raise OracleError(f"p must be in [0, 1], got {p}")
    rho = np.asarray(rho, dtype=np.float64)
    if np.any(rho < 0):
        raise OracleError("rho must be non-negative")
    phi = np.asarray(phi, dtype=np.float64)
    raw = _raw(rho)
    cos11, sin11 = np.cos(11.0 * phi), np.sin(11.0 * phi)
    base = _pop_high(rho) - _pop_low(rho)  # clean sz
    if family == "bit_flip":
        k = 2.0 * p - 1.0
        return 2.0 * raw * cos11, -k * 2.0 * raw * sin11, k * base
    if family == "amp_damp":
        f = math.sqrt(1.0 - p)
        sz = _pop_high(rho) + (2.0 * p - 1.0) * _pop_low(rho)
        return f * 2.0 * raw * cos11, -f * 2.0 * raw * sin11, sz
    f = math.sqrt(1.0 - p)  # phase damping
    return f * 2.0 * raw * cos11, -f * 2.0 * raw * sin11, base


def brute_force_apply(field: LocalDensityField, ch: KrausChannel) -> LocalDensityField:
    """Reference operator sum: explicit python loop over pixels.

    Intended for small grids (<= 32 x 32); no renormalization, no
    Hermitizing cleanup.
    """
    if field.grid != ch.grid:
        raise GridError("state and channel grids differ")
    ny, nx = field.grid.shape
    if nx * ny > 32 * 32:
        raise OracleError("brute force oracle is restricted to <= 32x32 grids")
    out = np.zeros_like(field.data)
    for j in range(ny):
        for i in range(nx):
            acc = np.zeros((2, 2), dtype=np.complex128)
            r = field.data[j, i]
            for w, ops in ch.terms:
                for K in ops:
                    k = K.data[j, i]
                    acc += w * (k @ r @ k.conj().T)
            out[j, i] = acc
    return LocalDensityField(field.grid, ComplexMatrixField(field.grid, out),
                             field.mask.copy())
