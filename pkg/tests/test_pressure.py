"""Tests for the shape problem, the force balance and the pressure field"""

import numpy as np
import pytest

from squeeze_flow.config import DEFAULT_PARAMS
from squeeze_flow.core.pressure import (SolverError, StalledDynamicsError, WetMask, classify_cells,
                                        gap_rate_from_balance, pressure_field, solve_shape)

DX2 = DEFAULT_PARAMS.cell_size ** 2


def disk_mask(n: int, radius: float) -> np.ndarray:
    centers = np.arange(n) + 0.5 - n / 2
    return centers[:, None] ** 2 + centers[None, :] ** 2 < radius ** 2


def test_single_wet_cell():
    wet = np.zeros((5, 5), dtype=bool)
    wet[2, 2] = True
    shape = solve_shape(WetMask.from_booleans(wet), DEFAULT_PARAMS)
    assert shape.phi[2, 2] == pytest.approx(-DX2 / 4, rel=1e-10)
    assert np.count_nonzero(shape.phi) == 1


def test_disk_matches_paraboloid():
    radius = 60
    wet = disk_mask(160, radius - 0.5)
    shape = solve_shape(WetMask.from_booleans(wet), DEFAULT_PARAMS)

    centers = np.arange(160) + 0.5 - 80
    r2 = centers[:, None] ** 2 + centers[None, :] ** 2
    exact = (r2 - radius ** 2) / 4 * DX2
    error = np.abs(shape.phi - exact)[wet].max()
    assert error <= 0.02 * radius ** 2 / 4 * DX2
    assert shape.residual <= DEFAULT_PARAMS.solver_tol
    assert (shape.phi[wet] < 0).all()
    assert (shape.phi[~wet] == 0).all()


def test_shape_is_rotation_equivariant():
    wet = disk_mask(40, 12)
    wet[5:12, 20:38] = True
    wet[30:33, 3:9] = True
    phi = solve_shape(WetMask.from_booleans(wet), DEFAULT_PARAMS).phi
    rotated = solve_shape(WetMask.from_booleans(np.rot90(wet)), DEFAULT_PARAMS).phi
    np.testing.assert_allclose(rotated, np.rot90(phi), rtol=0, atol=1e-9 * np.abs(phi).max())


def test_empty_mask_is_stalled():
    with pytest.raises(StalledDynamicsError):
        solve_shape(WetMask.from_booleans(np.zeros((4, 4), dtype=bool)), DEFAULT_PARAMS)


def test_iteration_cap_raises_solver_error():
    params = DEFAULT_PARAMS.with_overrides(solver_max_iter=1)
    with pytest.raises(SolverError):
        solve_shape(WetMask.from_booleans(disk_mask(160, 50)), params)


def test_classify_cells_with_subcell_interface():
    f_star = np.zeros((3, 3))
    f_star[1, 1] = 1.0
    f_star[1, 2] = 0.3
    mask = classify_cells(f_star, DEFAULT_PARAMS.h_ref, DEFAULT_PARAMS)
    assert mask.wet.tolist() == [[False] * 3, [False, True, False], [False] * 3]
    assert mask.interface[1, 2] and not mask.interface[1, 0]
    assert mask.liquid_cells == pytest.approx(1.3)
    assert mask.face_x.shape == (4, 3) and mask.face_y.shape == (3, 4)
    assert mask.face_x[2, 1] == pytest.approx(2.0)
    assert mask.face_y[1, 2] == pytest.approx(1 / 0.8)
    assert mask.face_x[0, 0] == 0.0

    shape = solve_shape(mask, DEFAULT_PARAMS)
    assert shape.phi[1, 1] == pytest.approx(-DX2 / (2 + 2 + 2 + 1.25), rel=1e-10)


def test_cell_centered_interface_when_subcell_disabled():
    params = DEFAULT_PARAMS.with_overrides(interface_subcell=False)
    f_star = np.zeros((3, 3))
    f_star[1, 1] = 0.7
    mask = classify_cells(f_star, params.h_ref, params)
    assert set(np.unique(mask.face_x)) == {0.0, 1.0}
    assert solve_shape(mask, params).phi[1, 1] == pytest.approx(-DX2 / 4, rel=1e-10)


def test_classify_cells_scales_with_gap():
    f_star = np.full((2, 2), 0.3)
    assert not classify_cells(f_star, DEFAULT_PARAMS.h_ref, DEFAULT_PARAMS).wet.any()
    assert classify_cells(f_star, 0.5 * DEFAULT_PARAMS.h_ref, DEFAULT_PARAMS).wet.all()


def test_gap_rate_closes_force_balance():
    wet = disk_mask(160, 30)
    mask = WetMask.from_booleans(wet)
    shape = solve_shape(mask, DEFAULT_PARAMS)
    h = 5e-7
    rate = gap_rate_from_balance(shape, mask, h, DEFAULT_PARAMS)

    area = wet.sum() * DEFAULT_PARAMS.cell_area
    integral = shape.phi.sum() * DEFAULT_PARAMS.cell_area
    capillary = DEFAULT_PARAMS.contact_angle_cos_sum * DEFAULT_PARAMS.surface_tension * area / h
    assert rate == pytest.approx(capillary * h ** 3 / (12 * DEFAULT_PARAMS.viscosity * integral), rel=1e-12)
    assert rate < 0

    pushed = DEFAULT_PARAMS.with_overrides(external_force=1.0)
    assert gap_rate_from_balance(shape, mask, h, pushed) < rate


def test_gap_rate_of_a_disk_matches_lubrication_limit():
    # lone disk of radius R: dh/dt = -2 (cos1 + cos2) sigma h² / (3 mu R²)
    wet = disk_mask(160, 59.5)
    mask = WetMask.from_booleans(wet)
    shape = solve_shape(mask, DEFAULT_PARAMS)
    h = 1e-7
    radius = np.sqrt(wet.sum() / np.pi) * DEFAULT_PARAMS.cell_size
    p = DEFAULT_PARAMS
    expected = -2 * p.contact_angle_cos_sum * p.surface_tension * h ** 2 / (3 * p.viscosity * radius ** 2)
    assert gap_rate_from_balance(shape, mask, h, p) == pytest.approx(expected, rel=0.10)


def test_pressure_field_scales_shape():
    wet = disk_mask(20, 6)
    mask = WetMask.from_booleans(wet)
    shape = solve_shape(mask, DEFAULT_PARAMS)
    h = 1e-6
    rate = gap_rate_from_balance(shape, mask, h, DEFAULT_PARAMS)
    solution = pressure_field(shape, rate, h, DEFAULT_PARAMS)
    np.testing.assert_allclose(solution.p_hat, 12 * DEFAULT_PARAMS.viscosity * rate / h ** 3 * shape.phi)
    assert (solution.p_hat >= 0).all()
    assert solution.p_hat.max() > 0
    assert solution.gap_rate == rate


def test_degenerate_balance_raises():
    mask = WetMask.from_booleans(np.zeros((3, 3), dtype=bool))
    shape = solve_shape(WetMask.from_booleans(np.eye(3, dtype=bool)), DEFAULT_PARAMS)
    with pytest.raises(SolverError):
        gap_rate_from_balance(shape, mask, 1e-6, DEFAULT_PARAMS)
