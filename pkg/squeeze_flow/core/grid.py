"""Computational grid, liquid state and droplet deposition"""

import logging
import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Tuple

import numpy as np

from ..config.sim_config import ParameterError, SimParams
from .patterns import DropPattern, ImprintImage, PatternError

logger = logging.getLogger(__name__)

# Modified volume fraction field f* = f·h/h_ref, shape (grid_n, grid_n), axis 0 is x
VofField = np.ndarray


@dataclass(frozen=True)
class SimState:
    """
    Evolving liquid state of one run

    Attributes:
        t (float): Spread time, s
        h (float): Uniform plate gap, m
        f_star (np.ndarray): Modified volume fraction field
        outflow_volume (float): Liquid lost through the domain boundary so far, m³
        initial_volume (float): Liquid dispensed at t = 0, m³
        steps (int): Number of completed time steps
        gap_rate (float): Gap reduction rate of the last step, m/s (0 before the first step)
    """

    t: float
    h: float
    f_star: VofField
    outflow_volume: float
    initial_volume: float
    steps: int = 0
    gap_rate: float = 0.0

    def advanced(self, **changes) -> 'SimState':
        return replace(self, **changes)


def volume_fraction(f_star: VofField, h: float, params: SimParams) -> np.ndarray:
    """Plain volume fraction f = f*·h_ref/h"""
    return f_star * (params.h_ref / h)


def liquid_volume(f_star: VofField, params: SimParams) -> float:
    """Liquid volume held in the domain, m³"""
    return float(f_star.sum()) * params.cell_area * params.h_ref


def volume_balance_error(state: SimState, params: SimParams) -> float:
    """Relative drift of dispensed volume against held plus outflowed volume"""
    held = liquid_volume(state.f_star, params)
    return abs(state.initial_volume - (held + state.outflow_volume)) / state.initial_volume


def wet_fraction(f_star: VofField, h: float, params: SimParams) -> float:
    return float((volume_fraction(f_star, h, params) >= params.wet_threshold).mean())


@lru_cache(maxsize=16)
def _droplet_stencil(cells_per_pitch: int, radius_cells: float, samples: int) -> Tuple[int, np.ndarray]:
    """
    Coverage of one droplet disk relative to its nozzle's cell block

    The disk is centered at the block center. Coverage comes from samples×samples
    point sampling per cell; partially covered cells are then rescaled so the
    stencil area equals pi·r² exactly.

    Returns:
        (offset, coverage): first covered cell relative to the block origin, square coverage array
    """
    center = cells_per_pitch / 2.0
    lo = math.floor(center - radius_cells)
    hi = math.ceil(center + radius_cells)
    cells = np.arange(lo, hi, dtype=float)
    sub = (np.arange(samples, dtype=float) + 0.5) / samples
    # sample coordinates relative to the disk center, one row per cell
    pts = (cells[:, None] + sub[None, :] - center).ravel()
    inside = (pts[:, None] ** 2 + pts[None, :] ** 2) <= radius_cells ** 2
    n = len(cells)
    counts = inside.reshape(n, samples, n, samples).sum(axis=(1, 3))
    coverage = counts.astype(float) / (samples * samples)

    full = coverage >= 1.0
    partial = ~full & (coverage > 0.0)
    target = math.pi * radius_cells ** 2
    partial_sum = coverage[partial].sum()
    if partial_sum > 0:
        coverage[partial] *= (target - full.sum()) / partial_sum
    coverage.setflags(write=False)
    return lo, coverage


def init_state(dp: DropPattern, params: SimParams) -> SimState:
    """
    Deposit one droplet disk per On nozzle at gap h0

    Args:
        dp: Droplet pattern, nozzle_n × nozzle_n
        params: Simulation parameters

    Returns:
        SimState at t = 0 and h = initial_gap

    Raises:
        PatternError: If the pattern does not match the printhead
        ParameterError: If one droplet disk is wider than half the domain
    """
    if dp.size != params.nozzle_n:
        raise PatternError(f"Pattern is {dp.size}×{dp.size}, printhead has {params.nozzle_n}×{params.nozzle_n}")

    n = params.grid_n
    radius_cells = params.droplet_radius / params.cell_size
    if radius_cells > n / 2:
        raise ParameterError(f"Droplet radius of {radius_cells:.2f} cells exceeds half the domain")

    lo, coverage = _droplet_stencil(params.cells_per_pitch, radius_cells, params.subcell_samples)
    stamp = coverage * (params.initial_gap / params.h_ref)
    width = stamp.shape[0]

    # pad so stamps near the edges land fully; the rim is booked as outflow
    pad = max(0, -lo, lo + width - params.cells_per_pitch)
    padded = np.zeros((n + 2 * pad, n + 2 * pad))
    for i, j in dp.nozzles():
        x0 = i * params.cells_per_pitch + lo + pad
        y0 = j * params.cells_per_pitch + lo + pad
        padded[x0:x0 + width, y0:y0 + width] += stamp

    f_star = padded[pad:pad + n, pad:pad + n].copy()
    padded[pad:pad + n, pad:pad + n] = 0.0
    clipped = float(padded.sum())
    initial_volume = dp.count * params.droplet_volume
    outflow = clipped * params.cell_area * params.h_ref

    logger.debug(f"Deposited {dp.count} droplets of radius {radius_cells:.3f} cells, "
                 f"{outflow:.3e} m³ outside the domain")
    return SimState(t=0.0, h=params.initial_gap, f_star=f_star,
                    outflow_volume=outflow, initial_volume=initial_volume)


def binarize_imprint(f_star: VofField, h: float, params: SimParams) -> ImprintImage:
    """Imprint image: a pixel is On where f = f*·h_ref/h reaches the wet threshold"""
    if h <= 0:
        raise ValueError(f"Gap must be positive, got {h}")
    return ImprintImage(volume_fraction(f_star, h, params) >= params.wet_threshold)
