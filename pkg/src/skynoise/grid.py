"""Discretized plane and per-pixel field containers.

Array convention (single source of truth for the whole package):
    every field stores its data as a numpy array of shape ``(ny, nx)``
    (plus trailing component axes), C-ordered, so element ``[j, i]``
    belongs to the point ``(x[i], y[j])``.  Row index j runs along y,
    column index i along x.  Flattened (row-major) order is therefore
    ``j * nx + i``.

Pixel nodes are ``x[i] = -extent + i * dx`` with ``dx = 2*extent/(nx-1)``,
so the window endpoints are grid nodes.  Integration weights clip the
outermost pixels to the window ``[-extent, extent]^2``: boundary pixels
carry half a pixel area, corners a quarter.  With these weights a
constant integrand integrates to the exact window area.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

SKGF_MAGIC = b"SKGF"
SKGF_VERSION = 1
_HEADER = struct.Struct("<4sIIIdI")  # magic, version, nx, ny, extent, components


class GridError(ValueError):
    """Invalid grid construction or incompatible grids."""


@dataclass(frozen=True)
class Grid:
    """Uniform, origin-centered sampling of the plane in units of w0."""

    nx: int
    ny: int
    extent: float

    def __post_init__(self):
        if self.nx < 16 or self.ny < 16:
            raise GridError(f"grid must be at least 16x16, got {self.nx}x{self.ny}")
        if not self.extent > 0:
            raise GridError(f"extent must be positive, got {self.extent}")

    @property
    def dx(self) -> float:
        return 2.0 * self.extent / (self.nx - 1)

    @property
    def dy(self) -> float:
        return 2.0 * self.extent / (self.ny - 1)

    @property
    def shape(self) -> tuple:
        return (self.ny, self.nx)

    def axes(self):
        """1-D coordinate arrays (x along columns, y along rows)."""
        x = np.linspace(-self.extent, self.extent, self.nx)
        y = np.linspace(-self.extent, self.extent, self.ny)
        return x, y

    def meshgrid(self):
        """2-D coordinate arrays X, Y of shape (ny, nx)."""
        x, y = self.axes()
        return np.meshgrid(x, y, indexing="xy")

    def polar(self):
        """Polar coordinates (rho, phi) per pixel, phi in (-pi, pi]."""
        X, Y = self.meshgrid()
        return np.hypot(X, Y), np.arctan2(Y, X)

    def pixel_weights(self) -> np.ndarray:
        """Clipped pixel areas: interior dx*dy, edges halved, corners quartered."""
        wx = np.full(self.nx, self.dx)
        wx[0] = wx[-1] = 0.5 * self.dx
        wy = np.full(self.ny, self.dy)
        wy[0] = wy[-1] = 0.5 * self.dy
        return np.outer(wy, wx)


def make_grid(nx: int, ny: int, extent: float) -> Grid:
    """Build an origin-centered grid; rejects undersized dimensions."""
    return Grid(int(nx), int(ny), float(extent))


def _check_same_grid(a, b):
    if a.grid != b.grid:
        raise GridError(f"incompatible grids: {a.grid} vs {b.grid}")


@dataclass(frozen=True)
class ScalarField:
    """One real value per pixel.  Immutable after construction."""

    grid: Grid
    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.float64)
        if data.shape != self.grid.shape:
            raise GridError(f"data shape {data.shape} != grid shape {self.grid.shape}")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)


@dataclass(frozen=True)
class ComplexField:
    """One complex value per pixel."""

    grid: Grid
    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.complex128)
        if data.shape != self.grid.shape:
            raise GridError(f"data shape {data.shape} != grid shape {self.grid.shape}")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)


@dataclass(frozen=True)
class ComplexMatrixField:
    """One 2x2 complex matrix per pixel, shape (ny, nx, 2, 2)."""

    grid: Grid
    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.complex128)
        if data.shape != self.grid.shape + (2, 2):
            raise GridError(
                f"data shape {data.shape} != {self.grid.shape + (2, 2)}"
            )
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    def hermitian_residual(self) -> float:
        """Max |rho - rho^dagger| over the field."""
        return float(np.max(np.abs(self.data - np.conj(np.swapaxes(self.data, -1, -2)))))


FieldLike = (ScalarField, ComplexField, ComplexMatrixField)


def map_field(fld, fn):
    """Apply a pure per-pixel function ``fn(values, x, y) -> values``.

    The function receives the full data array plus coordinate arrays and
    must operate elementwise (numpy-vectorized); evaluation order is
    unobservable.  The result keeps the input's field kind.
    """
    X, Y = fld.grid.meshgrid()
    out = fn(fld.data, X, Y)
    return type(fld)(fld.grid, out)


def integrate(fld: ScalarField) -> float:
    """Window integral: sum of value times clipped pixel area.

    Non-finite values are rejected with the offending pixel location.
    The summation is a serial numpy reduction, hence deterministic; the
    classic trapezoid rule coincides with these weights on this node
    layout, so no separate scheme flag is needed.
    """
    bad = ~np.isfinite(fld.data)
    if bad.any():
        j, i = np.argwhere(bad)[0]
        raise FloatingPointError(f"non-finite value at pixel (i={i}, j={j})")
    return float(np.sum(fld.data * fld.grid.pixel_weights()))


def skgf_bytes(grid: Grid, components) -> bytes:
    """Serialize an SKGF snapshot: header + components*ny*nx float64, row-major.

    Header layout (little-endian): magic "SKGF", u32 version, u32 nx,
    u32 ny, f64 extent, u32 component count.
    """
    arrays = [np.ascontiguousarray(np.asarray(c, dtype=np.float64)) for c in components]
    for a in arrays:
        if a.shape != grid.shape:
            raise GridError(f"component shape {a.shape} != grid shape {grid.shape}")
    parts = [_HEADER.pack(SKGF_MAGIC, SKGF_VERSION, grid.nx, grid.ny,
                          grid.extent, len(arrays))]
    parts.extend(a.tobytes() for a in arrays)
    return b"".join(parts)


def dump_fields(path, grid: Grid, components) -> None:
    """Write an SKGF snapshot to a file."""
    with open(path, "wb") as fh:
        fh.write(skgf_bytes(grid, components))


def load_fields(path):
    """Read an SKGF snapshot back as (grid, [arrays])."""
    with open(path, "rb") as fh:
        raw = fh.read(_HEADER.size)
        magic, version, nx, ny, extent, ncomp = _HEADER.unpack(raw)
        if magic != SKGF_MAGIC:
            raise GridError(f"bad SKGF magic {magic!r}")
        if version != SKGF_VERSION:
            raise GridError(f"unsupported SKGF version {version}")
        grid = Grid(nx, ny, extent)
        out = []
        for _ in range(ncomp):
            buf = fh.read(8 * nx * ny)
            out.append(np.frombuffer(buf, dtype="<f8").reshape(ny, nx))
    return grid, out
