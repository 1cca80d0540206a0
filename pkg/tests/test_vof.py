"""Tests for face velocities, time step selection, advection and overfill redistribution"""

import numpy as np
import pytest

from squeeze_flow.config import DEFAULT_PARAMS
from squeeze_flow.core.grid import SimState
from squeeze_flow.core.pressure import PressureSolution, StalledDynamicsError
from squeeze_flow.core.vof import (AdvectionError, FaceVelocities, advect, apply_gap_change_and_redistribute,
                                   compact_front, face_velocities, redistribute_overfill, stable_timestep)

DX = DEFAULT_PARAMS.cell_size


def uniform_velocity(n: int, u: float = 0.0, v: float = 0.0) -> FaceVelocities:
    return FaceVelocities(np.full((n + 1, n), u), np.full((n, n + 1), v))


def test_velocity_points_down_the_pressure_gradient():
    p_hat = np.zeros((3, 3))
    p_hat[1, 1] = 100.0
    ones_x, ones_y = np.ones((4, 3)), np.ones((3, 4))
    vel = face_velocities(PressureSolution(p_hat, -1e-3, 1.0, ones_x, ones_y), 1e-6, DEFAULT_PARAMS)
    assert vel.u[2, 1] > 0 and vel.u[1, 1] < 0
    assert vel.v[1, 2] > 0 and vel.v[1, 1] < 0
    assert vel.u[2, 1] == pytest.approx(-vel.u[1, 1])
    expected = 1e-12 / (12 * DEFAULT_PARAMS.viscosity * DX) * 100.0
    assert vel.u[2, 1] == pytest.approx(expected)


def test_zero_motion_is_stalled():
    with pytest.raises(StalledDynamicsError):
        stable_timestep(uniform_velocity(4), 0.0, 1e-6, DEFAULT_PARAMS)


def test_timestep_respects_all_limits():
    vel = uniform_velocity(8, u=2.0)
    h, rate = 1e-6, -1e-3
    dt = stable_timestep(vel, rate, h, DEFAULT_PARAMS)
    assert dt <= DEFAULT_PARAMS.cfl_number * DX / 2.0 * (1 + 1e-12)
    assert dt <= DEFAULT_PARAMS.gap_change_per_step_max * h / abs(rate) * (1 + 1e-12)
    assert vel.outgoing_courant(dt, DX).max() <= 1.0

    gap_only = stable_timestep(uniform_velocity(8), rate, h, DEFAULT_PARAMS)
    assert gap_only == pytest.approx(DEFAULT_PARAMS.gap_change_per_step_max * h / abs(rate))


def test_timestep_underflow_is_stalled():
    with pytest.raises(StalledDynamicsError):
        stable_timestep(uniform_velocity(4, u=1e12), 0.0, 1e-6, DEFAULT_PARAMS)


def test_unit_courant_shifts_one_cell():
    f = np.zeros((6, 6))
    f[2, 3] = 0.8
    dt = 1e-3
    moved, outflow = advect(f, uniform_velocity(6, u=DX / dt), dt, DEFAULT_PARAMS)
    expected = np.zeros((6, 6))
    expected[3, 3] = 0.8
    np.testing.assert_allclose(moved, expected, atol=1e-15)
    assert outflow == 0.0


def test_boundary_outflow_is_booked():
    f = np.zeros((6, 6))
    f[5, 1] = 0.5
    dt = 1e-3
    moved, outflow = advect(f, uniform_velocity(6, u=0.5 * DX / dt), dt, DEFAULT_PARAMS)
    assert moved[5, 1] == pytest.approx(0.25)
    assert outflow == pytest.approx(0.25 * DEFAULT_PARAMS.cell_area * DEFAULT_PARAMS.h_ref)


def test_advection_conserves_volume():
    rng = np.random.default_rng(3)
    n = 16
    f = rng.uniform(0, 1, (n, n))
    vel = FaceVelocities(rng.uniform(-1, 1, (n + 1, n)), rng.uniform(-1, 1, (n, n + 1)))
    dt = 0.2 * DX
    moved, outflow = advect(f, vel, dt, DEFAULT_PARAMS)
    before = f.sum() * DEFAULT_PARAMS.cell_area * DEFAULT_PARAMS.h_ref
    after = moved.sum() * DEFAULT_PARAMS.cell_area * DEFAULT_PARAMS.h_ref + outflow
    assert abs(before - after) / before < 1e-12
    assert moved.min() >= 0.0


def test_cfl_violation_raises():
    f = np.full((4, 4), 0.5)
    dt = 1e-3
    with pytest.raises(AdvectionError):
        advect(f, uniform_velocity(4, u=1.5 * DX / dt), dt, DEFAULT_PARAMS)


def test_overfill_spreads_to_open_neighbours():
    f = np.zeros((5, 5))
    f[2, 2] = 3.0
    result = redistribute_overfill(f, 1.0, DEFAULT_PARAMS)
    assert result[2, 2] == 1.0
    assert result[1, 2] == result[3, 2] == result[2, 1] == result[2, 3] == pytest.approx(0.5)
    assert result.sum() == pytest.approx(3.0, rel=1e-14)


def test_overfill_inside_full_region_travels_to_its_edge():
    f = np.zeros((9, 9))
    f[2:7, 2:7] = 1.0
    f[4, 4] = 2.5
    result = redistribute_overfill(f, 1.0, DEFAULT_PARAMS)
    assert result.max() <= 1.0 + 1e-9
    assert result.sum() == pytest.approx(f.sum(), rel=1e-13)
    assert result[2:7, 2:7].min() == pytest.approx(1.0)


def test_gap_change_advances_clock_and_keeps_volume():
    f = np.zeros((10, 10))
    f[4:6, 4:6] = 1.0
    state = SimState(t=1e-4, h=1e-6, f_star=f, outflow_volume=0.0, initial_volume=1.0)
    new = apply_gap_change_and_redistribute(state, -0.05, 2e-6, DEFAULT_PARAMS)
    assert new.h == pytest.approx(1e-6 - 1e-7)
    assert new.t == pytest.approx(1e-4 + 2e-6)
    assert new.gap_rate == -0.05
    assert new.f_star.max() <= new.h / DEFAULT_PARAMS.h_ref * (1 + 1e-9)
    assert new.f_star.sum() == pytest.approx(f.sum(), rel=1e-13)


def test_gap_overshoot_raises():
    state = SimState(t=0.0, h=6e-9, f_star=np.full((4, 4), 0.001), outflow_volume=0.0, initial_volume=1.0)
    with pytest.raises(AdvectionError):
        apply_gap_change_and_redistribute(state, -1.0, 5e-9, DEFAULT_PARAMS)


def test_compaction_returns_leaked_liquid_to_the_front_cell():
    f = np.zeros((5, 5))
    f[2, 1] = 1.0
    f[2, 2] = 0.6
    f[2, 3] = 0.3
    result = compact_front(f, 1.0, DEFAULT_PARAMS)
    assert result[2, 1] == 1.0
    assert result[2, 2] == pytest.approx(0.9, abs=1e-15)
    assert result[2, 3] == pytest.approx(0.0, abs=1e-15)
    assert result.sum() == pytest.approx(f.sum(), rel=1e-14)


def test_compaction_uses_the_current_capacity():
    f = np.zeros((5, 5))
    f[2, 2] = 0.3
    f[2, 3] = 0.1
    # f = 0.6 at capacity 0.5, but only 0.3 at capacity 1
    assert compact_front(f, 0.5, DEFAULT_PARAMS)[2, 3] == pytest.approx(0.0, abs=1e-15)
    np.testing.assert_array_equal(compact_front(f, 1.0, DEFAULT_PARAMS), f)


def test_compaction_only_moves_liquid_into_wet_cells():
    rng = np.random.default_rng(4)
    f = rng.random((12, 12))
    wet = f >= DEFAULT_PARAMS.wet_threshold
    result = compact_front(f, 1.0, DEFAULT_PARAMS)
    assert result.sum() == pytest.approx(f.sum(), rel=1e-13)
    assert (result[wet] >= f[wet] - 1e-15).all()
    assert (result[~wet] <= f[~wet] + 1e-15).all()
    assert result.min() >= 0.0
    assert result.max() <= 1.0 + 1e-12


def test_gap_change_compacts_front_when_enabled():
    f = np.zeros((6, 6))
    f[2, 2] = 0.6
    f[2, 3] = 0.3
    state = SimState(t=0.0, h=1e-6, f_star=f, outflow_volume=0.0, initial_volume=1.0)
    compacted = apply_gap_change_and_redistribute(state, 0.0, 1e-6, DEFAULT_PARAMS)
    assert compacted.f_star[2, 2] == pytest.approx(0.9, abs=1e-15)
    plain = apply_gap_change_and_redistribute(state, 0.0, 1e-6,
                                              DEFAULT_PARAMS.with_overrides(front_compaction=False))
    np.testing.assert_array_equal(plain.f_star, f)
