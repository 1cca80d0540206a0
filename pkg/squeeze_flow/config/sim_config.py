import math
import logging
from dataclasses import dataclass, fields, replace
from typing import Any, Dict

logger = logging.getLogger(__name__)


class ParameterError(Exception):
    """Custom exception for invalid simulation parameters"""
    pass


@dataclass(frozen=True)
class SimParams:
    """
    Physical and numerical constants of one squeeze-flow run

    Attributes:
        viscosity (float): Liquid viscosity, Pa·s
        surface_tension (float): Liquid surface tension, N/m
        contact_angle_cos_sum (float): cos(theta_1) + cos(theta_2) of the two plates
        droplet_volume (float): Volume of one dispensed droplet, m³
        initial_gap (float): Plate separation at first contact, m
        h_ref (float): Reference gap of the modified volume fraction, m
        external_force (float): Force pressing the superstrate, N
        nozzle_n (int): Nozzles per side of the printhead
        nozzle_pitch (float): Distance between neighbouring nozzles, m
        cells_per_pitch (int): Computational cells per nozzle pitch
        ambient_pressure (float): Ambient pressure, Pa (bookkeeping only)
        term_coverage_max (float): Wet fraction above which a run stops
        term_time_max (float): Spread time above which a run stops, s
        term_h_min (float): Film thickness below which a run stops, m
        cfl_number (float): Courant number of the explicit advection
        gap_change_per_step_max (float): Largest relative gap change per step
        wet_threshold (float): Volume fraction at which a cell counts as wet
        solver_tol (float): Relative residual of the elliptic solve
        solver_max_iter (int): Iteration cap of the elliptic solve, 0 means 20·grid_n
        front_compaction (bool): Keep the liquid front one cell wide after every step
    """

    viscosity: float = 0.001
    surface_tension: float = 0.032
    contact_angle_cos_sum: float = 1.76
    droplet_volume: float = 6e-15
    initial_gap: float = 1e-6
    h_ref: float = 1e-6
    external_force: float = 0.0
    nozzle_n: int = 20
    nozzle_pitch: float = 84.5e-6
    cells_per_pitch: int = 8
    ambient_pressure: float = 101325.0
    term_coverage_max: float = 0.90
    term_time_max: float = 1.0
    term_h_min: float = 5e-9
    cfl_number: float = 0.25
    gap_change_per_step_max: float = 0.01
    wet_threshold: float = 0.5
    solver_tol: float = 1e-8
    solver_max_iter: int = 0
    subcell_samples: int = 16
    interface_subcell: bool = True
    theta_min: float = 0.05
    initial_snapshot_time: float = 1e-12
    min_timestep: float = 1e-15
    redistribution_sweeps: int = 10
    front_compaction: bool = True

    def __post_init__(self):
        self.validate()

    @property
    def grid_n(self) -> int:
        """Cells per side of the computational grid"""
        return self.nozzle_n * self.cells_per_pitch

    @property
    def cell_size(self) -> float:
        """Edge length of one computational cell, m"""
        return self.nozzle_pitch / self.cells_per_pitch

    @property
    def cell_area(self) -> float:
        return self.cell_size ** 2

    @property
    def max_iterations(self) -> int:
        return self.solver_max_iter or 20 * self.grid_n

    @property
    def droplet_radius(self) -> float:
        """Radius of a freshly deposited droplet disk, m"""
        return math.sqrt(self.droplet_volume / (math.pi * self.initial_gap))

    def validate(self):
        """
        Check the invariants of the parameter set

        Raises:
            ParameterError: If any value is out of range
        """
        positive = [
            'viscosity', 'surface_tension', 'droplet_volume', 'initial_gap', 'h_ref',
            'nozzle_pitch', 'term_time_max', 'term_h_min', 'cfl_number',
            'gap_change_per_step_max', 'solver_tol', 'theta_min',
            'initial_snapshot_time', 'min_timestep',
        ]
        for name in positive:
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ParameterError(f"{name} must be a positive finite number, got {value!r}")

        for name in ['nozzle_n', 'cells_per_pitch', 'subcell_samples', 'redistribution_sweeps']:
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise ParameterError(f"{name} must be a positive integer, got {value!r}")

        if not isinstance(self.solver_max_iter, int) or self.solver_max_iter < 0:
            raise ParameterError(f"solver_max_iter must be a non-negative integer, got {self.solver_max_iter!r}")
        if not 0 < self.contact_angle_cos_sum <= 2:
            raise ParameterError(
                f"contact_angle_cos_sum must lie in (0, 2], got {self.contact_angle_cos_sum}")
        if not 0 < self.wet_threshold < 1:
            raise ParameterError(f"wet_threshold must lie in (0, 1), got {self.wet_threshold}")
        if not 0 < self.term_coverage_max <= 1:
            raise ParameterError(f"term_coverage_max must lie in (0, 1], got {self.term_coverage_max}")
        if self.cfl_number > 0.5:
            raise ParameterError(f"cfl_number must not exceed 0.5, got {self.cfl_number}")
        if self.gap_change_per_step_max >= 1:
            raise ParameterError("gap_change_per_step_max must be below 1")
        if self.theta_min > 1:
            raise ParameterError("theta_min must not exceed 1")
        if self.external_force < 0 or not math.isfinite(self.external_force):
            raise ParameterError(f"external_force must be non-negative, got {self.external_force}")
        if self.term_h_min >= self.initial_gap:
            raise ParameterError("term_h_min must be below initial_gap")

    def with_overrides(self, **overrides: Any) -> 'SimParams':
        """Return a copy with some fields replaced"""
        unknown = set(overrides) - {f.name for f in fields(self)}
        if unknown:
            raise ParameterError(f"Unknown parameters: {', '.join(sorted(unknown))}")
        return replace(self, **overrides)

    def as_dict(self) -> Dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


DEFAULT_PARAMS = SimParams()
