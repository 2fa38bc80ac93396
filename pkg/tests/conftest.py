"""Shared models, grids and oracle decompositions.

The dense eigendecompositions dominate the suite's runtime, so every test
module reuses the session-scoped oracles built here.
"""

import numpy as np
import pytest

from pointersim import (
    AtomicMeasure,
    CouplingProfile,
    ModelSpec,
    build_grid,
    discretize,
    liouville_spectrum,
    validate,
    zero_state,
)


def make_constant_model(levels, amplitude, omega_max=10.0, scale=1.0):
    return validate(ModelSpec(
        levels=np.asarray(levels, float),
        omega_max=omega_max,
        coupling=CouplingProfile.constant(amplitude),
        coupling_scale=scale,
    ))


def normalized_density(grid, mass=1.0):
    density = np.exp(-((grid.nodes - 4.0) ** 2))
    return density * (mass / np.dot(grid.weights, density))


def random_valid_state(grid, spectrum, rng, with_cc=False):
    """Random state exercising every sector, with unit trace."""
    n = spectrum.n_levels
    m = grid.size
    raw = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    rho_d = raw @ raw.conj().T
    rho_d /= np.trace(rho_d).real / 0.4          # discrete sector carries mass 0.4
    state = zero_state(grid, n)
    state.rho_d = rho_d
    state.rho_omega_regular = normalized_density(grid, mass=0.5)
    state.rho_omega_atoms = AtomicMeasure(locations=[6.5], weights=[0.1])
    state.rho_omegai = 0.01 * (rng.normal(size=(n, m)) + 1j * rng.normal(size=(n, m)))
    state.rho_iomega = state.rho_omegai.conj()
    if with_cc:
        cc = 0.01 * (rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m)))
        state.rho_omegaomega = cc + cc.conj().T
    return state.validate()


@pytest.fixture(scope="session")
def single_level_model():
    """Acceptance-scale model: one level at 1.0, constant V = 0.05 on [0, 10]."""
    return make_constant_model([1.0], 0.05)


@pytest.fixture(scope="session")
def two_level_model():
    """Acceptance-scale model: levels at 1.0 and 2.0, constant V = 0.05."""
    return make_constant_model([1.0, 2.0], 0.05)


@pytest.fixture(scope="session")
def grid_2000():
    return build_grid(10.0, 2000)


@pytest.fixture(scope="session")
def oracle_single(single_level_model, grid_2000):
    return discretize(single_level_model, grid_2000)


@pytest.fixture(scope="session")
def oracle_two(two_level_model, grid_2000):
    return discretize(two_level_model, grid_2000)


@pytest.fixture(scope="session")
def spectrum_single(single_level_model, grid_2000):
    return liouville_spectrum(single_level_model, grid_2000)


@pytest.fixture(scope="session")
def spectrum_two(two_level_model, grid_2000):
    return liouville_spectrum(two_level_model, grid_2000)


@pytest.fixture(scope="session")
def unit_model():
    """Fast unit-test scale: one level, stronger coupling, coarser grid."""
    return make_constant_model([1.0], 0.1)


@pytest.fixture(scope="session")
def grid_800():
    return build_grid(10.0, 800)


@pytest.fixture(scope="session")
def oracle_unit(unit_model, grid_800):
    return discretize(unit_model, grid_800)
