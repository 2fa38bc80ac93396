import numpy as np
import pytest

from pointersim import (
    build_grid,
    coherence,
    discretize,
    embed_discrete,
    energy_distribution,
    evolve_pure,
    fit_exponential_rate,
    fitted_decay_rate,
    level_shift,
    pointer_weights,
    resonance_center,
    survival_probability,
)
from pointersim.errors import RecurrenceWindowExceeded
from .conftest import make_constant_model


@pytest.fixture(scope="module")
def decoupled():
    spec = make_constant_model([1.0, 2.0], 0.1, scale=0.0)
    grid = build_grid(10.0, 64)
    return discretize(spec, grid)


def test_zero_coupling_spectrum_is_union_of_levels_and_nodes(decoupled):
    expected = np.sort(np.concatenate([decoupled.spec.levels, decoupled.grid.nodes]))
    assert np.array_equal(decoupled.eigenvalues, expected)


def test_eigenvector_orthonormality(oracle_unit):
    assert oracle_unit.orthonormality_defect() < 1e-10


def test_recurrence_time_estimate(oracle_unit):
    assert oracle_unit.recurrence_time == pytest.approx(2 * np.pi / (10.0 / 800), rel=1e-12)


def test_second_order_shift_matches_direct_sum(unit_model, grid_800):
    # the regularized direct sum over nodes is the discrete counterpart of the
    # PV quadrature; both approximate the same displacement, with the exact
    # level pushed down when most continuum weight lies above it
    direct = np.sum(0.1 ** 2 * grid_800.weights / (1.0 - grid_800.nodes))
    shift = level_shift(unit_model, grid_800, 0)
    assert direct == pytest.approx(-shift, rel=0.1)
    assert shift > 0 and direct < 0


def test_evolve_pure_identity_at_zero_time(oracle_unit):
    rng = np.random.default_rng(3)
    psi = rng.normal(size=oracle_unit.size) + 1j * rng.normal(size=oracle_unit.size)
    psi /= np.linalg.norm(psi)
    assert np.allclose(evolve_pure(oracle_unit, psi, 0.0), psi, atol=1e-10)


def test_zero_coupling_evolution_is_a_pure_phase(decoupled):
    psi_t = evolve_pure(decoupled, [1.0, 0.0], 3.7)
    assert psi_t[0] == pytest.approx(np.exp(-1j * 1.0 * 3.7), abs=1e-12)
    assert np.max(np.abs(psi_t[1:])) < 1e-14


def test_unitarity_for_random_states(oracle_unit):
    rng = np.random.default_rng(5)
    psi = rng.normal(size=oracle_unit.size) + 1j * rng.normal(size=oracle_unit.size)
    psi /= np.linalg.norm(psi)
    for t in (0.1, 10.0, 200.0):
        assert np.linalg.norm(evolve_pure(oracle_unit, psi, t)) == pytest.approx(1.0, abs=1e-10)


def test_warning_beyond_recurrence_window(oracle_unit):
    with pytest.warns(RecurrenceWindowExceeded):
        evolve_pure(oracle_unit, [1.0], 0.6 * oracle_unit.recurrence_time)


def test_survival_starts_at_one(oracle_unit):
    assert survival_probability(oracle_unit, 0, 0.0) == pytest.approx(1.0, abs=1e-12)


def test_zero_coupling_survival_stays_one(decoupled):
    for t in (0.5, 12.0, 19.0):
        assert survival_probability(decoupled, 0, t) == pytest.approx(1.0, abs=1e-12)


def test_survival_decay_rate_matches_golden_rule(oracle_unit):
    gamma = 2 * np.pi * 0.1 ** 2
    fitted = fitted_decay_rate(oracle_unit, 0)
    assert fitted == pytest.approx(gamma, rel=0.05)


def test_fit_window_from_spectral_width_matches_explicit_window(oracle_unit):
    gamma = 2 * np.pi * 0.1 ** 2
    explicit = fitted_decay_rate(oracle_unit, 0, t_min=0.1 / gamma, t_max=2.0 / gamma)
    automatic = fitted_decay_rate(oracle_unit, 0)
    assert automatic == pytest.approx(explicit, rel=0.02)


def test_grid_refinement_leaves_fitted_rate_stable(unit_model):
    gamma = 2 * np.pi * 0.1 ** 2
    coarse = discretize(unit_model, build_grid(10.0, 400))
    rate_coarse = fitted_decay_rate(coarse, 0, t_min=0.1 / gamma, t_max=2.0 / gamma)
    rate_fine = fitted_decay_rate(
        discretize(unit_model, build_grid(10.0, 800)), 0, t_min=0.1 / gamma, t_max=2.0 / gamma)
    assert abs(rate_coarse - rate_fine) < 0.05 * gamma


def test_coherence_initial_value(oracle_two):
    amps = np.array([1.0, 1.0]) / np.sqrt(2.0)
    assert coherence(oracle_two, 0, 1, amps, 0.0) == pytest.approx(0.5, abs=1e-12)


def test_zero_coupling_coherence_rotates_without_damping(decoupled):
    amps = np.array([1.0, 1.0]) / np.sqrt(2.0)
    for t in (1.0, 17.0):
        rho01 = coherence(decoupled, 0, 1, amps, t)
        assert abs(rho01) == pytest.approx(0.5, abs=1e-12)
        assert rho01 == pytest.approx(0.5 * np.exp(-1j * (1.0 - 2.0) * t), abs=1e-10)


def test_energy_distribution_zero_coupling_empty(decoupled):
    assert np.all(energy_distribution(decoupled, [1.0, 0.0], 5.0) == 0.0)


def test_energy_distribution_conserves_probability(oracle_unit):
    t = 30.0
    psi = evolve_pure(oracle_unit, [1.0], t)
    density = energy_distribution(oracle_unit, [1.0], t)
    discrete = float(np.abs(psi[0]) ** 2)
    assert discrete + np.dot(oracle_unit.grid.weights, density) == pytest.approx(1.0, abs=1e-10)


def test_late_time_distribution_is_a_lorentzian_line(oracle_unit):
    from scipy.optimize import curve_fit

    gamma = 2 * np.pi * 0.1 ** 2
    delta = 0.1 ** 2 * np.log(9.0)
    t = 5.0 / gamma
    density = energy_distribution(oracle_unit, [1.0], t)
    nodes = oracle_unit.grid.nodes
    mask = np.abs(nodes - 1.0) < 10 * gamma

    def lorentzian(e, center, half_width, strength):
        return strength / ((e - center) ** 2 + half_width ** 2)

    popt, _ = curve_fit(lorentzian, nodes[mask], density[mask],
                        p0=(1.0, gamma / 2, gamma / (2 * np.pi)))
    center, half_width = popt[0], abs(popt[1])
    assert 1.0 - center == pytest.approx(delta, rel=0.10)
    assert half_width == pytest.approx(gamma / 2, rel=0.30)
    total = np.dot(oracle_unit.grid.weights, density)
    assert total == pytest.approx(1.0 - np.exp(-5.0), abs=0.05)


def test_level_continuum_coherence_damps_at_half_rate(oracle_unit):
    # a superposition of the level and one far-off continuum node: the node
    # amplitude barely moves, so the cross coherence inherits the level's
    # amplitude damping at gamma / 2
    gamma = 2 * np.pi * 0.1 ** 2
    node_index = int(np.argmin(np.abs(oracle_unit.grid.nodes - 5.0)))
    psi0 = np.zeros(oracle_unit.size, complex)
    psi0[0] = 1 / np.sqrt(2.0)
    psi0[1 + node_index] = 1 / np.sqrt(2.0)
    times = np.linspace(0.1 / gamma, 2.0 / gamma, 40)
    mixed = [abs(coherence(oracle_unit, 0, 1 + node_index, psi0, t)) for t in times]
    fitted = fit_exponential_rate(times, mixed)
    assert fitted == pytest.approx(gamma / 2.0, rel=0.10)


def test_pointer_weights_follow_initial_occupations(oracle_two):
    amps = np.array([0.6, 0.8j])
    gamma = 2 * np.pi * 0.05 ** 2
    weights = pointer_weights(oracle_two, amps, 5.0 / gamma)
    assert weights[0] == pytest.approx(0.36, abs=0.05)
    assert weights[1] == pytest.approx(0.64, abs=0.05)
    assert np.sum(weights) == pytest.approx(1.0, abs=1e-10)


def test_resonance_center_sits_below_the_bare_level(oracle_unit):
    delta = 0.1 ** 2 * np.log(9.0)
    displacement = 1.0 - resonance_center(oracle_unit, 0)
    assert displacement == pytest.approx(delta, rel=0.10)


def test_embed_discrete_shapes(oracle_two):
    full = embed_discrete(oracle_two, [0.6, 0.8j])
    assert full.shape == (oracle_two.size,)
    assert np.all(full[2:] == 0.0)
    with pytest.raises(ValueError):
        embed_discrete(oracle_two, [1.0, 0.0, 0.0])


def test_fit_exponential_rate_recovers_exact_exponential():
    times = np.linspace(1.0, 50.0, 20)
    assert fit_exponential_rate(times, np.exp(-0.03 * times)) == pytest.approx(0.03, rel=1e-10)
    with pytest.raises(ValueError):
        fit_exponential_rate(times, np.zeros_like(times))
