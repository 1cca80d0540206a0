"""Tests for simulation parameters, parameter files and split recipes"""

import math

import pytest

from squeeze_flow.config import (DEFAULT_PARAMS, PARAMS_FILE_MAPPING, ParameterError, ParamsMapper,
                                 SimParams, dump_params, load_params_file, load_yaml_config)
from squeeze_flow.dataset.preprocessing import SplitRecipe, load_split_recipe


def test_default_geometry():
    params = SimParams()
    assert params.grid_n == 160
    assert math.isclose(params.cell_size, 84.5e-6 / 8)
    assert math.isclose(params.droplet_radius, math.sqrt(6e-15 / (math.pi * 1e-6)))
    assert params.max_iterations == 20 * 160


def test_defaults_are_physical():
    assert DEFAULT_PARAMS.viscosity == 0.001
    assert DEFAULT_PARAMS.surface_tension == 0.032
    assert DEFAULT_PARAMS.contact_angle_cos_sum == 1.76
    assert DEFAULT_PARAMS.term_h_min == 5e-9
    assert DEFAULT_PARAMS.term_coverage_max == 0.90


@pytest.mark.parametrize('overrides', [
    {'viscosity': 0.0},
    {'cfl_number': 0.6},
    {'wet_threshold': 1.0},
    {'nozzle_n': 0},
    {'term_h_min': 2e-6},
    {'contact_angle_cos_sum': 2.5},
    {'external_force': -1.0},
])
def test_invalid_parameters_rejected(overrides):
    with pytest.raises(ParameterError):
        SimParams(**overrides)


def test_with_overrides():
    params = DEFAULT_PARAMS.with_overrides(cells_per_pitch=4)
    assert params.grid_n == 80
    assert DEFAULT_PARAMS.grid_n == 160
    with pytest.raises(ParameterError):
        DEFAULT_PARAMS.with_overrides(no_such_field=1)


def test_load_params_file(tmp_path):
    path = tmp_path / 'run.params'
    path.write_text("# slower liquid\nviscosity=0.002\n\ncells_per_pitch=4\ngrid_n=80\n"
                    "interface_subcell=false\nfront_compaction=off\n")
    params = load_params_file(path)
    assert params.viscosity == 0.002
    assert params.cells_per_pitch == 4
    assert params.interface_subcell is False
    assert params.front_compaction is False
    assert DEFAULT_PARAMS.front_compaction is True
    assert params.surface_tension == DEFAULT_PARAMS.surface_tension


def test_params_file_rejects_bad_entries(tmp_path):
    path = tmp_path / 'bad.params'
    path.write_text("viscocity=0.002\n")
    with pytest.raises(ParameterError, match='Unknown'):
        load_params_file(path)

    path.write_text("grid_n=100\n")
    with pytest.raises(ParameterError, match='disagrees'):
        load_params_file(path)

    path.write_text("nozzle_n=2.5\n")
    with pytest.raises(ParameterError):
        load_params_file(path)

    with pytest.raises(ParameterError):
        load_params_file(tmp_path / 'missing.params')


def test_dump_and_reload(tmp_path):
    params = DEFAULT_PARAMS.with_overrides(external_force=0.5, theta_min=0.1)
    path = tmp_path / 'dump.params'
    path.write_text(dump_params(params))
    assert load_params_file(path) == params


def test_mapper_transformers():
    mapper = ParamsMapper(PARAMS_FILE_MAPPING)
    assert mapper.parse_int('8') == 8
    assert mapper.parse_bool('Yes') is True
    with pytest.raises(ValueError):
        mapper.parse_float('nan')


def test_default_split_recipe():
    recipe = load_split_recipe()
    assert set(recipe.splits) == {'training', 'validation', 'test'}
    assert recipe.window == 72
    assert recipe.max_coverage == 0.9
    assert all(recipe.splits[name][1] == 0.125 for name in recipe.splits)
    assert recipe.splits['test'][30] == 1.0


def test_split_recipe_rejects_overassignment():
    with pytest.raises(ParameterError):
        SplitRecipe.from_config({'splits': {'a': {1: 0.75}, 'b': {1: 0.5}}})
    with pytest.raises(ParameterError):
        SplitRecipe.from_config({'splits': {'a': {1: 0.0}}})


def test_load_yaml_config_requires_mapping(tmp_path):
    path = tmp_path / 'list.yaml'
    path.write_text("- 1\n- 2\n")
    with pytest.raises(ParameterError):
        load_yaml_config(path)
