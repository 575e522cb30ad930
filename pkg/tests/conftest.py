import numpy as np
import pytest

from sauterpair.grid import SPEED_OF_LIGHT, build_free_basis, build_grid

C = SPEED_OF_LIGHT
C2 = C * C


@pytest.fixture(scope="session")
def small_grid():
    return build_grid(1.2, 32)


@pytest.fixture(scope="session")
def small_basis(small_grid):
    return build_free_basis(small_grid, C)


@pytest.fixture(scope="session")
def medium_grid():
    return build_grid(1.2, 64)


@pytest.fixture(scope="session")
def medium_basis(medium_grid):
    return build_free_basis(medium_grid, C)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_normalized_field(rng, grid):
    values = rng.standard_normal((2, grid.n_points)) + 1j * rng.standard_normal((2, grid.n_points))
    values /= np.sqrt(np.sum(np.abs(values) ** 2) * grid.dz)
    return values
