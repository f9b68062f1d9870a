import numpy as np
import pytest

from skynoise import StateSpec, build_state, make_grid


@pytest.fixture(scope="session")
def grid128():
    return make_grid(128, 128, 6.0)


@pytest.fixture(scope="session")
def grid256():
    return make_grid(256, 256, 6.0)


@pytest.fixture(scope="session")
def state10_256(grid256):
    return build_state(StateSpec(1, 0), grid256)


def random_psd_field(grid, seed=0):
    """Random Hermitian PSD 2x2 per pixel (unnormalized traces)."""
    rng = np.random.default_rng(seed)
    a = rng.normal(size=grid.shape + (2, 2)) + 1j * rng.normal(size=grid.shape + (2, 2))
    rho = a @ np.conj(np.swapaxes(a, -1, -2))
    from skynoise.grid import ComplexMatrixField
    from skynoise.modes import LocalDensityField
    return LocalDensityField(grid, ComplexMatrixField(grid, rho),
                             np.ones(grid.shape, bool))
