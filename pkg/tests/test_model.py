import json

import numpy as np
import pytest

from pointersim import (
    CouplingProfile,
    ModelSpec,
    coupling_at,
    load_model,
    model_from_dict,
    model_to_dict,
    validate,
)
from pointersim.errors import (
    DegenerateLevels,
    LevelOutsideContinuum,
    ModelInvalid,
    NegativeScale,
    OutOfSupport,
)
from .conftest import make_constant_model


def test_valid_single_level_accepted():
    spec = make_constant_model([1.0], 0.1)
    assert spec.n_levels == 1
    assert spec.omega_max == 10.0


def test_degenerate_levels_rejected():
    with pytest.raises(DegenerateLevels):
        make_constant_model([1.0, 1.0], 0.1)


def test_level_outside_continuum_rejected():
    with pytest.raises(LevelOutsideContinuum):
        make_constant_model([12.0], 0.1)


def test_level_on_boundary_rejected():
    with pytest.raises(LevelOutsideContinuum):
        make_constant_model([0.0], 0.1)
    with pytest.raises(LevelOutsideContinuum):
        make_constant_model([10.0], 0.1)


def test_negative_scale_rejected():
    with pytest.raises(NegativeScale):
        make_constant_model([1.0], 0.1, scale=-0.5)


def test_constant_coupling_same_everywhere():
    spec = make_constant_model([1.0], 0.1)
    for omega in (0.0, 1.0, 3.7, 10.0):
        assert coupling_at(spec, omega, 0) == 0.1


def test_zero_scale_gives_zero_coupling():
    spec = make_constant_model([1.0], 0.1, scale=0.0)
    assert coupling_at(spec, 4.2, 0) == 0.0


def test_gaussian_window_peaks_at_level():
    spec = validate(ModelSpec(
        levels=[2.0], omega_max=10.0,
        coupling=CouplingProfile.gaussian_window(amplitude=0.3, width=0.5),
    ))
    assert coupling_at(spec, 2.0, 0) == pytest.approx(0.3, abs=0.0)
    assert coupling_at(spec, 2.5, 0) == pytest.approx(0.3 * np.exp(-0.5))


def test_lorentzian_window_peaks_at_center():
    spec = validate(ModelSpec(
        levels=[2.0], omega_max=10.0,
        coupling=CouplingProfile.lorentzian_window(amplitude=0.2, width=1.0, center=3.0),
    ))
    assert coupling_at(spec, 3.0, 0) == pytest.approx(0.2)
    assert coupling_at(spec, 4.0, 0) == pytest.approx(0.1)


def test_tabulated_profile_interpolates():
    spec = validate(ModelSpec(
        levels=[1.0], omega_max=10.0,
        coupling=CouplingProfile.tabulated(omega=[0.0, 5.0, 10.0], values=[0.0, 0.5, 0.0]),
    ))
    assert coupling_at(spec, 2.5, 0) == pytest.approx(0.25)
    assert coupling_at(spec, 5.0, 0) == pytest.approx(0.5)


def test_tabulated_profile_must_cover_support():
    with pytest.raises(ModelInvalid):
        validate(ModelSpec(
            levels=[1.0], omega_max=10.0,
            coupling=CouplingProfile.tabulated(omega=[0.0, 5.0], values=[0.1, 0.1]),
        ))


def test_coupling_rescaling_is_exact():
    # powers of two keep the float products exact
    base = make_constant_model([1.0], 0.1, scale=0.5)
    doubled = make_constant_model([1.0], 0.1, scale=1.0)
    for omega in (0.3, 1.0, 7.7):
        assert coupling_at(doubled, omega, 0) == 2.0 * coupling_at(base, omega, 0)


def test_coupling_is_deterministic():
    spec = validate(ModelSpec(
        levels=[1.0, 2.0], omega_max=10.0,
        coupling=CouplingProfile.gaussian_window(amplitude=[0.1, 0.2], width=0.3),
    ))
    assert coupling_at(spec, 1.234, 1) == coupling_at(spec, 1.234, 1)


def test_vectorized_evaluation_matches_scalar():
    spec = make_constant_model([1.0], 0.1)
    omegas = np.array([0.0, 2.0, 9.0])
    assert np.array_equal(coupling_at(spec, omegas, 0), [0.1, 0.1, 0.1])


def test_out_of_support_rejected():
    spec = make_constant_model([1.0], 0.1)
    with pytest.raises(OutOfSupport):
        coupling_at(spec, -0.5, 0)
    with pytest.raises(OutOfSupport):
        coupling_at(spec, 10.5, 0)


def test_bad_level_index_rejected():
    spec = make_constant_model([1.0], 0.1)
    with pytest.raises(IndexError):
        coupling_at(spec, 1.0, 3)


def test_json_round_trip(tmp_path):
    data = {
        "levels": [1.0, 2.0],
        "omega_max": 10.0,
        "coupling": {"kind": "constant", "amplitude": [0.05, 0.07]},
        "coupling_scale": 1.5,
    }
    path = tmp_path / "model.json"
    path.write_text(json.dumps(data))
    spec = load_model(path)
    assert spec.coupling_scale == 1.5
    assert coupling_at(spec, 3.0, 1) == pytest.approx(1.5 * 0.07)

    round_tripped = model_from_dict(model_to_dict(spec))
    assert np.array_equal(round_tripped.levels, spec.levels)
    assert coupling_at(round_tripped, 3.0, 1) == coupling_at(spec, 3.0, 1)


def test_missing_fields_rejected():
    with pytest.raises(ModelInvalid):
        model_from_dict({"levels": [1.0], "omega_max": 10.0})
    with pytest.raises(ModelInvalid):
        model_from_dict({"levels": [1.0], "omega_max": 10.0, "coupling": {"kind": "constant"}})


def test_unknown_coupling_kind_rejected():
    with pytest.raises(ModelInvalid):
        model_from_dict({
            "levels": [1.0], "omega_max": 10.0,
            "coupling": {"kind": "polka-dot", "amplitude": 0.1},
        })
