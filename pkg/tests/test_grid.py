"""Tests for droplet deposition and volume bookkeeping"""

import math

import numpy as np
import pytest

from squeeze_flow.config import DEFAULT_PARAMS, ParameterError
from squeeze_flow.core.grid import (binarize_imprint, init_state, liquid_volume, volume_balance_error,
                                    wet_fraction)
from squeeze_flow.core.patterns import DropPattern, PatternError


def test_interior_droplet_holds_exact_volume():
    dp = DropPattern.from_indices([10 * 20 + 10])
    state = init_state(dp, DEFAULT_PARAMS)
    assert state.t == 0.0
    assert state.h == DEFAULT_PARAMS.initial_gap
    assert state.outflow_volume == 0.0
    assert liquid_volume(state.f_star, DEFAULT_PARAMS) == pytest.approx(6e-15, rel=1e-12)
    assert state.f_star.min() >= 0.0
    assert state.f_star.max() <= 1.0 + 1e-12


def test_edge_droplet_books_clipped_rim_as_outflow():
    dp = DropPattern.from_indices([0])
    state = init_state(dp, DEFAULT_PARAMS)
    assert state.outflow_volume > 0.0
    assert volume_balance_error(state, DEFAULT_PARAMS) < 1e-12


def test_droplet_sits_in_its_nozzle_block():
    dp = DropPattern.from_indices([3 * 20 + 17])
    state = init_state(dp, DEFAULT_PARAMS)
    rows, cols = np.nonzero(state.f_star)
    cpp = DEFAULT_PARAMS.cells_per_pitch
    center = (rows.mean(), cols.mean())
    assert center == pytest.approx((3 * cpp + cpp / 2 - 0.5, 17 * cpp + cpp / 2 - 0.5))


def test_deposition_is_rotation_equivariant():
    dp = DropPattern.from_indices([2 * 20 + 5])
    field = init_state(dp, DEFAULT_PARAMS).f_star
    rotated = init_state(dp.rotated(), DEFAULT_PARAMS).f_star
    np.testing.assert_array_equal(np.rot90(field), rotated)


def test_many_droplets_conserve_volume():
    dp = DropPattern(np.ones((20, 20), dtype=bool))
    state = init_state(dp, DEFAULT_PARAMS)
    assert state.initial_volume == pytest.approx(400 * 6e-15)
    assert volume_balance_error(state, DEFAULT_PARAMS) < 1e-12


def test_initial_imprint_marks_droplet_footprint():
    dp = DropPattern.from_indices([10 * 20 + 10])
    state = init_state(dp, DEFAULT_PARAMS)
    imprint = binarize_imprint(state.f_star, state.h, DEFAULT_PARAMS)
    radius_cells = DEFAULT_PARAMS.droplet_radius / DEFAULT_PARAMS.cell_size
    wet_cells = imprint.wet_pixels.sum()
    assert abs(wet_cells - math.pi * radius_cells ** 2) < 2 * math.pi * radius_cells
    assert imprint.wet_pixels[82:86, 82:86].all()
    assert wet_fraction(state.f_star, state.h, DEFAULT_PARAMS) == pytest.approx(wet_cells / 25600)


def test_init_state_rejects_mismatched_pattern():
    dp = DropPattern(np.ones((10, 10), dtype=bool))
    with pytest.raises(PatternError):
        init_state(dp, DEFAULT_PARAMS)


def test_init_state_rejects_oversized_droplets():
    params = DEFAULT_PARAMS.with_overrides(nozzle_n=1, cells_per_pitch=4)
    with pytest.raises(ParameterError):
        init_state(DropPattern.from_indices([0], size=1), params)


def test_binarization_is_monotone_in_wet_threshold():
    rng = np.random.default_rng(3)
    h = 4e-7
    n = DEFAULT_PARAMS.grid_n
    f_star = rng.random((n, n)) * h / DEFAULT_PARAMS.h_ref
    images = [binarize_imprint(f_star, h, DEFAULT_PARAMS.with_overrides(wet_threshold=w)).wet_pixels
              for w in (0.2, 0.5, 0.8)]
    assert images[0].sum() > images[1].sum() > images[2].sum()
    assert not (images[1] & ~images[0]).any()
    assert not (images[2] & ~images[1]).any()
