import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..config.sim_config import SimParams
from .grid import SimState, VofField
from .pressure import PressureSolution, StalledDynamicsError

logger = logging.getLogger(__name__)


class AdvectionError(Exception):
    """Custom exception for failures of the volume fraction update"""
    pass


@dataclass(frozen=True)
class FaceVelocities:
    """
    Depth-averaged film velocity on the cell faces

    Attributes:
        u (np.ndarray): Velocity along axis 0 on the x-faces, m/s, shape (n+1, n)
        v (np.ndarray): Velocity along axis 1 on the y-faces, m/s, shape (n, n+1)
    """

    u: np.ndarray
    v: np.ndarray

    @property
    def max_speed(self) -> float:
        return float(max(np.abs(self.u).max(), np.abs(self.v).max()))

    def outgoing_courant(self, dt: float, dx: float) -> np.ndarray:
        """Sum of outgoing Courant numbers per cell"""
        u, v = self.u, self.v
        out = (np.maximum(u[1:, :], 0) - np.minimum(u[:-1, :], 0)
               + np.maximum(v[:, 1:], 0) - np.minimum(v[:, :-1], 0))
        return out * (dt / dx)


def face_velocities(p: PressureSolution, h: float, params: SimParams) -> FaceVelocities:
    """
    Lubrication velocity -(h²/12 mu)·grad(p) on every face

    At fixed h the capillary term of p_hat is uniform, so grad(p_hat) = grad(p).
    The pressure outside the wet cells is zero and the face conductances place
    the interface where the volume fractions put it.
    """
    mobility = h ** 2 / (12.0 * params.viscosity * params.cell_size)
    px = np.pad(p.p_hat, ((1, 1), (0, 0)))
    py = np.pad(p.p_hat, ((0, 0), (1, 1)))
    u = -mobility * p.face_x * (px[1:, :] - px[:-1, :])
    v = -mobility * p.face_y * (py[:, 1:] - py[:, :-1])
    return FaceVelocities(u, v)


def stable_timestep(vel: FaceVelocities, gap_rate: float, h: float, params: SimParams) -> float:
    """
    Largest time step allowed by the Courant limit, positivity and the gap-change limit

    Raises:
        StalledDynamicsError: If nothing moves or the step underflows
    """
    dx = params.cell_size
    speed = vel.max_speed
    if speed == 0.0 and gap_rate == 0.0:
        raise StalledDynamicsError("Zero velocities and zero gap rate")

    limits = []
    if speed > 0.0:
        limits.append(params.cfl_number * dx / speed)
        # a cell may not lose more than it holds
        worst = float(vel.outgoing_courant(1.0, dx).max())
        limits.append(1.0 / worst)
    if gap_rate != 0.0:
        limits.append(params.gap_change_per_step_max * h / abs(gap_rate))

    dt = min(limits)
    if dt < params.min_timestep:
        raise StalledDynamicsError(f"Time step {dt:.3e} s underflows {params.min_timestep:.1e} s")
    return dt


def advect(f_star: VofField, vel: FaceVelocities, dt: float, params: SimParams) -> Tuple[VofField, float]:
    """
    One donor-cell upwind update of the modified volume fraction

    Boundary faces are outflow-only: cells outside the domain hold no liquid, so
    nothing flows in and whatever crosses outward is booked as outflow.

    Returns:
        (new field, outflow volume in m³)

    Raises:
        AdvectionError: If dt violates the Courant limit
    """
    dx = params.cell_size
    courant = vel.outgoing_courant(dt, dx)
    if courant.max() > 1.0 + 1e-12:
        raise AdvectionError(f"CFL violation: outgoing Courant number {courant.max():.4f} > 1")

    fx = np.pad(f_star, ((1, 1), (0, 0)))
    fy = np.pad(f_star, ((0, 0), (1, 1)))
    cu = vel.u * (dt / dx)
    cv = vel.v * (dt / dx)
    flux_x = np.where(cu > 0, fx[:-1, :], fx[1:, :]) * cu
    flux_y = np.where(cv > 0, fy[:, :-1], fy[:, 1:]) * cv

    updated = f_star - (flux_x[1:, :] - flux_x[:-1, :]) - (flux_y[:, 1:] - flux_y[:, :-1])
    np.maximum(updated, 0.0, out=updated)

    leaving = flux_x[-1, :].sum() - flux_x[0, :].sum() + flux_y[:, -1].sum() - flux_y[:, 0].sum()
    outflow = float(leaving) * params.cell_area * params.h_ref
    return updated, outflow


def _neighbour_shift(values: np.ndarray, axis: int, direction: int) -> np.ndarray:
    """values of the face neighbour in the given direction, zero outside the domain"""
    shifted = np.zeros_like(values)
    if axis == 0:
        if direction > 0:
            shifted[:-1, :] = values[1:, :]
        else:
            shifted[1:, :] = values[:-1, :]
    else:
        if direction > 0:
            shifted[:, :-1] = values[:, 1:]
        else:
            shifted[:, 1:] = values[:, :-1]
    return shifted


_DIRECTIONS = ((0, 1), (0, -1), (1, 1), (1, -1))


def redistribute_overfill(f_star: VofField, capacity: float, params: SimParams) -> VofField:
    """
    Push the excess of overfull cells (f > 1) into their face neighbours

    Each overfull cell keeps exactly `capacity` and shares its excess equally among
    the neighbours below capacity, or among all neighbours when none is. The sum of
    f* is unchanged.

    Raises:
        AdvectionError: If the excess cannot be placed within the sweep budget
    """
    field = f_star.copy()
    inside = np.ones_like(field)
    exists = [_neighbour_shift(inside, axis, d) > 0 for axis, d in _DIRECTIONS]
    tolerance = capacity * 1e-9
    max_sweeps = params.redistribution_sweeps * params.grid_n

    for sweep in range(max_sweeps):
        excess = field - capacity
        over = excess > tolerance
        if not over.any():
            if sweep:
                logger.debug(f"Redistributed overfill in {sweep} sweeps")
            return field

        under = field < capacity
        takers = [e & (_neighbour_shift(under.astype(float), axis, d) > 0)
                  for e, (axis, d) in zip(exists, _DIRECTIONS)]
        n_takers = sum(t.astype(int) for t in takers)
        n_exists = sum(e.astype(int) for e in exists)
        use_takers = n_takers > 0
        receivers = [np.where(use_takers, t, e) for t, e in zip(takers, exists)]
        share = np.where(over, excess, 0.0) / np.where(use_takers, n_takers, n_exists)

        field[over] = capacity
        for recv, (axis, d) in zip(receivers, _DIRECTIONS):
            given = np.where(recv, share, 0.0)
            # what cell c gives towards +d lands on the neighbour at c + d
            field += _neighbour_shift(given, axis, -d)

    raise AdvectionError(f"Overfill redistribution did not settle in {max_sweeps} sweeps")


def compact_front(f_star: VofField, capacity: float, params: SimParams) -> VofField:
    """
    Pull liquid that upwinding leaked into non-wet cells back into wet neighbours below capacity

    A partly filled wet cell thus keeps its liquid until it is full and the front stays
    one cell wide, so the wet region tracks the liquid footprint. A wet cell never
    receives more than its deficit and a non-wet cell never gives more than it holds;
    the sum of f* is unchanged and no cell changes from wet to non-wet.
    """
    field = f_star.copy()
    threshold = params.wet_threshold * capacity
    tolerance = capacity * 1e-12

    for sweep in range(params.redistribution_sweeps):
        wet = field >= threshold
        deficit = np.where(wet, np.maximum(capacity - field, 0.0), 0.0)
        demands = [_neighbour_shift(deficit, axis, d) for axis, d in _DIRECTIONS]
        total_demand = sum(demands)
        givers = ~wet & (field > 0.0) & (total_demand > tolerance)
        if not givers.any():
            break

        # givers sharing each wet cell split its deficit evenly
        n_givers = sum(_neighbour_shift(givers.astype(float), axis, d) for axis, d in _DIRECTIONS)
        safe_total = np.where(givers, total_demand, 1.0)
        moved = np.zeros_like(field)
        for demand, (axis, d) in zip(demands, _DIRECTIONS):
            split = np.maximum(_neighbour_shift(n_givers, axis, d), 1.0)
            given = np.where(givers & (demand > 0.0),
                             np.minimum(field * demand / safe_total, demand / split), 0.0)
            moved -= given
            moved += _neighbour_shift(given, axis, -d)
        field += moved
        np.maximum(field, 0.0, out=field)
    else:
        logger.debug(f"Front compaction stopped after {params.redistribution_sweeps} sweeps")
    return field


def apply_gap_change_and_redistribute(state: SimState, gap_rate: float, dt: float,
                                      params: SimParams) -> SimState:
    """
    Advance the gap and the clock, remove overfill created by the squeeze and,
    when front_compaction is set, compact the liquid front

    Raises:
        AdvectionError: If the gap would drop below half the thickness floor
    """
    h_new = state.h + gap_rate * dt
    if h_new < 0.5 * params.term_h_min:
        raise AdvectionError(f"Gap update to {h_new:.3e} m overshoots the thickness floor")
    capacity = h_new / params.h_ref
    f_star = redistribute_overfill(state.f_star, capacity, params)
    if params.front_compaction:
        f_star = compact_front(f_star, capacity, params)
    return state.advanced(t=state.t + dt, h=h_new, f_star=f_star, gap_rate=gap_rate)
