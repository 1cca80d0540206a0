from .patterns import DropPattern, ImprintImage, PatternError, make_pattern_random
from .grid import SimState, binarize_imprint, init_state, liquid_volume, volume_balance_error
from .pressure import (SolverError, StalledDynamicsError, classify_cells, gap_rate_from_balance,
                       pressure_field, solve_shape)
from .vof import (AdvectionError, advect, apply_gap_change_and_redistribute, face_velocities,
                  stable_timestep)
from .schedule import SnapshotSchedule
from .driver import (SimulationError, Snapshot, TerminationStatus, analytic_single_droplet_h,
                     check_termination, run, step)

__all__ = [
    'DropPattern', 'ImprintImage', 'PatternError', 'make_pattern_random',
    'SimState', 'init_state', 'binarize_imprint', 'liquid_volume', 'volume_balance_error',
    'SolverError', 'StalledDynamicsError', 'classify_cells', 'solve_shape',
    'gap_rate_from_balance', 'pressure_field',
    'AdvectionError', 'face_velocities', 'stable_timestep', 'advect',
    'apply_gap_change_and_redistribute',
    'SnapshotSchedule', 'SimulationError', 'Snapshot', 'TerminationStatus',
    'check_termination', 'step', 'run', 'analytic_single_droplet_h',
]
