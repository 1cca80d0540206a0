import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

from ..config.sim_config import SimParams
from .grid import SimState, binarize_imprint, init_state, wet_fraction
from .patterns import DropPattern, ImprintImage
from .pressure import (StalledDynamicsError, classify_cells, gap_rate_from_balance,
                       pressure_field, solve_shape)
from .schedule import SnapshotSchedule
from .vof import advect, apply_gap_change_and_redistribute, face_velocities, stable_timestep

logger = logging.getLogger(__name__)

TERMINATION_REASONS = ('coverage', 'time', 'thickness', 'stalled')


class SimulationError(Exception):
    """Custom exception for driver misuse, such as stepping a finished run"""
    pass


@dataclass(frozen=True)
class Snapshot:
    """
    One dataset example: imprint image at a spread time

    Attributes:
        t (float): Spread time, s
        h (float): Film thickness, m
        imprint (ImprintImage): Wet/dry map at that time
        dp (DropPattern): Droplet pattern of the run
        step (int): Time step index the snapshot was taken at
    """

    t: float
    h: float
    imprint: ImprintImage
    dp: DropPattern
    step: int = 0


@dataclass(frozen=True)
class TerminationStatus:
    """
    Why and where a run stopped

    Attributes:
        reason (str): One of coverage, time, thickness, stalled
        final_t (float): Spread time of the last state, s
        final_h (float): Film thickness of the last state, m
    """

    reason: str
    final_t: float
    final_h: float

    def __post_init__(self):
        if self.reason not in TERMINATION_REASONS:
            raise ValueError(f"Unknown termination reason: {self.reason}")


def check_termination(state: SimState, params: SimParams) -> Optional[TerminationStatus]:
    """Return the reason the run must stop, or None to keep going"""
    if wet_fraction(state.f_star, state.h, params) > params.term_coverage_max:
        return TerminationStatus('coverage', state.t, state.h)
    if state.t > params.term_time_max:
        return TerminationStatus('time', state.t, state.h)
    if state.h < params.term_h_min:
        return TerminationStatus('thickness', state.t, state.h)
    return None


def step(state: SimState, params: SimParams) -> SimState:
    """
    Advance the film by one time step

    classify cells, solve the shape problem, close the force balance, build the face
    velocities, pick the time step, advect f*, then move the gap and redistribute overfill.

    Raises:
        SimulationError: If the state is already at or past a termination criterion
        SolverError, StalledDynamicsError, AdvectionError: From the step components
    """
    if state.h <= params.term_h_min:
        raise SimulationError(f"Refusing to step at h={state.h:.3e} m, at or below the thickness floor")
    status = check_termination(state, params)
    if status is not None:
        raise SimulationError(f"Refusing to step a terminated run ({status.reason})")

    mask = classify_cells(state.f_star, state.h, params)
    shape = solve_shape(mask, params)
    gap_rate = gap_rate_from_balance(shape, mask, state.h, params)
    pressure = pressure_field(shape, gap_rate, state.h, params)
    velocities = face_velocities(pressure, state.h, params)
    dt = stable_timestep(velocities, gap_rate, state.h, params)
    f_star, outflow = advect(state.f_star, velocities, dt, params)

    advected = state.advanced(f_star=f_star, outflow_volume=state.outflow_volume + outflow)
    new_state = apply_gap_change_and_redistribute(advected, gap_rate, dt, params)
    logger.debug(f"Step {state.steps + 1}: t={new_state.t:.4e} s, h={new_state.h:.4e} m, "
                 f"dt={dt:.3e} s, dh/dt={gap_rate:.3e} m/s, cg iterations={shape.iterations}")
    return new_state.advanced(steps=state.steps + 1)


def _snapshot(state: SimState, dp: DropPattern, params: SimParams) -> Snapshot:
    t = state.t if state.t > 0 else params.initial_snapshot_time
    return Snapshot(t=t, h=state.h, imprint=binarize_imprint(state.f_star, state.h, params),
                    dp=dp, step=state.steps)


def run(dp: DropPattern, params: SimParams, schedule: Optional[SnapshotSchedule] = None,
        on_step: Optional[Callable[[SimState], None]] = None) -> Tuple[List[Snapshot], TerminationStatus]:
    """
    Simulate one droplet pattern until a termination criterion is met

    Args:
        dp: Droplet pattern
        params: Simulation parameters
        schedule: Snapshot milestones, ratio 0.9 by default
        on_step: Optional callback receiving every state after a step

    Returns:
        (snapshots, termination status); states meeting a termination criterion are
        never recorded

    Raises:
        SolverError, AdvectionError: If a step fails for a reason other than stalling
    """
    schedule = schedule or SnapshotSchedule()
    state = init_state(dp, params)
    h0 = state.h
    logger.info(f"Starting run for {dp.count} droplets with {schedule}")

    status = check_termination(state, params)
    snapshots = [] if status else [_snapshot(state, dp, params)]
    reached = 0

    while status is None:
        try:
            state = step(state, params)
        except StalledDynamicsError as e:
            logger.warning(f"Run stalled at t={state.t:.4e} s: {str(e)}")
            status = TerminationStatus('stalled', state.t, state.h)
            break

        if on_step is not None:
            on_step(state)

        status = check_termination(state, params)
        if status is not None:
            break

        k = schedule.milestone_index(h0, state.h)
        if k > reached:
            snapshots.append(_snapshot(state, dp, params))
            reached = k

    logger.info(f"Run finished ({status.reason}) after {state.steps} steps: "
                f"t={status.final_t:.4e} s, h={status.final_h:.4e} m, {len(snapshots)} snapshots")
    return snapshots, status


def single_droplet_rate_constant(params: SimParams) -> float:
    """K = 4 pi sigma (cos1 + cos2) / (3 mu V), m⁻²s⁻¹; a lone droplet obeys dh/dt = -(K/2) h³"""
    return (4.0 * math.pi * params.surface_tension * params.contact_angle_cos_sum
            / (3.0 * params.viscosity * params.droplet_volume))


def analytic_single_droplet_h(t: float, params: SimParams) -> float:
    """Closed-form film thickness of one droplet squeezed by capillarity alone"""
    if t < 0:
        raise ValueError(f"Spread time must be non-negative, got {t}")
    h0 = params.initial_gap
    return h0 / math.sqrt(1.0 + single_droplet_rate_constant(params) * h0 ** 2 * t)


def analytic_single_droplet_time(h: float, params: SimParams) -> float:
    """Inverse of analytic_single_droplet_h"""
    h0 = params.initial_gap
    if not 0 < h <= h0:
        raise ValueError(f"Thickness must lie in (0, {h0}], got {h}")
    return ((h0 / h) ** 2 - 1.0) / (single_droplet_rate_constant(params) * h0 ** 2)
