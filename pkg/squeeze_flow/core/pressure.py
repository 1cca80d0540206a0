"""
Interior elliptic problem of the spreading film and the force balance closing it

Because the gap h is uniform, the pressure equation reduces to the shape problem
lap(phi) = 1 on wet cells with phi = 0 at the interface, and the pressure is
p_hat = (12 mu dh/dt / h³) phi. The gap rate follows from requiring the film
pressure to carry the external force.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import cg

from ..config.sim_config import SimParams
from .grid import VofField, volume_fraction

logger = logging.getLogger(__name__)


class SolverError(Exception):
    """Custom exception for failures of the elliptic solve or the force balance"""
    pass


class StalledDynamicsError(Exception):
    """Raised when the film has nothing left to drive it (no wet cell, zero velocities)"""
    pass


def _face_conductances(wet: np.ndarray, f: Optional[np.ndarray], theta_min: float):
    """
    Face conductances along both axes

    1 between two wet cells, 1/theta between a wet and a non-wet cell (theta·dx is the
    distance from the wet cell center to the interface), 0 elsewhere. Cells outside
    the domain are dry.
    """
    def along(axis: int) -> np.ndarray:
        pad = [(0, 0), (0, 0)]
        pad[axis] = (1, 1)
        wp = np.pad(wet, pad)
        lower = wp[:-1] if axis == 0 else wp[:, :-1]
        upper = wp[1:] if axis == 0 else wp[:, 1:]
        g = (lower & upper).astype(float)
        edge = lower ^ upper
        if f is None:
            g[edge] = 1.0
            return g
        fp = np.pad(np.minimum(f, 1.0), pad)
        f_lower = fp[:-1] if axis == 0 else fp[:, :-1]
        f_upper = fp[1:] if axis == 0 else fp[:, 1:]
        f_wet = np.where(lower, f_lower, f_upper)
        f_other = np.where(lower, f_upper, f_lower)
        theta = np.clip(f_wet + f_other - 0.5, theta_min, 1.0)
        g[edge] = 1.0 / theta[edge]
        return g

    return along(0), along(1)


@dataclass(frozen=True)
class WetMask:
    """
    Wet/interface classification of the cells

    Attributes:
        wet (np.ndarray): Cells with f >= wet_threshold
        interface (np.ndarray): Cells with 0 < f < wet_threshold
        face_x (np.ndarray): Conductances of the x-faces, shape (n+1, n)
        face_y (np.ndarray): Conductances of the y-faces, shape (n, n+1)
        liquid_cells (float): Liquid footprint in cell units
    """

    wet: np.ndarray
    interface: np.ndarray
    face_x: np.ndarray
    face_y: np.ndarray
    liquid_cells: float

    @classmethod
    def from_booleans(cls, wet: np.ndarray, interface: Optional[np.ndarray] = None) -> 'WetMask':
        """Mask without volume fractions: interface at the next cell center, footprint = wet cells"""
        wet = np.asarray(wet, dtype=bool)
        if interface is None:
            interface = np.zeros_like(wet)
        interface = np.asarray(interface, dtype=bool) & ~wet
        gx, gy = _face_conductances(wet, None, 1.0)
        return cls(wet, interface, gx, gy, float(wet.sum()))

    def wet_area(self, params: SimParams) -> float:
        return self.liquid_cells * params.cell_area


@dataclass(frozen=True)
class ShapeField:
    """
    Solution of lap(phi) = 1 on the wet cells

    Attributes:
        phi (np.ndarray): Shape function, m², zero outside the wet cells
        face_x (np.ndarray): Face conductances used by the solve
        face_y (np.ndarray): Face conductances used by the solve
        wet_area (float): Liquid footprint, m²
        residual (float): Relative residual of the linear solve
        iterations (int): Conjugate gradient iterations
    """

    phi: np.ndarray
    face_x: np.ndarray
    face_y: np.ndarray
    wet_area: float
    residual: float
    iterations: int


@dataclass(frozen=True)
class PressureSolution:
    """
    Film pressure and gap rate of one step

    Attributes:
        p_hat (np.ndarray): Modified pressure, Pa, zero outside the wet cells
        gap_rate (float): dh/dt, m/s
        wet_area (float): Liquid footprint, m²
        face_x (np.ndarray): Face conductances of the x-faces
        face_y (np.ndarray): Face conductances of the y-faces
    """

    p_hat: np.ndarray
    gap_rate: float
    wet_area: float
    face_x: np.ndarray
    face_y: np.ndarray


def classify_cells(f_star: VofField, h: float, params: SimParams) -> WetMask:
    """Split the grid into wet, interface and dry cells"""
    if h <= 0:
        raise ValueError(f"Gap must be positive, got {h}")
    f = volume_fraction(f_star, h, params)
    wet = f >= params.wet_threshold
    interface = (f > 0) & ~wet
    theta_source = f if params.interface_subcell else None
    gx, gy = _face_conductances(wet, theta_source, params.theta_min)
    liquid_cells = float(np.minimum(f, 1.0).sum())
    return WetMask(wet, interface, gx, gy, liquid_cells)


def _assemble(mask: WetMask, params: SimParams):
    wet = mask.wet
    n_unknowns = int(wet.sum())
    index = np.full(wet.shape, -1, dtype=np.int64)
    index[wet] = np.arange(n_unknowns)

    gx, gy = mask.face_x, mask.face_y
    diagonal = (gx[:-1, :] + gx[1:, :] + gy[:, :-1] + gy[:, 1:])[wet]

    rows = [np.arange(n_unknowns)]
    cols = [np.arange(n_unknowns)]
    data = [diagonal]
    for lower, upper in ((index[:-1, :], index[1:, :]), (index[:, :-1], index[:, 1:])):
        pair = (lower >= 0) & (upper >= 0)
        a, b = lower[pair], upper[pair]
        rows += [a, b]
        cols += [b, a]
        data += [-np.ones(a.size), -np.ones(a.size)]

    matrix = sparse.coo_matrix(
        (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n_unknowns, n_unknowns)).tocsr()
    rhs = np.full(n_unknowns, params.cell_size ** 2)
    return matrix, rhs, diagonal


def solve_shape(mask: WetMask, params: SimParams) -> ShapeField:
    """
    Solve lap(phi) = 1 on the wet cells with phi = 0 at the interface

    The 5-point finite-volume system is solved for psi = -phi, which makes it
    symmetric positive definite, by Jacobi-preconditioned conjugate gradients.

    Args:
        mask: Cell classification with face conductances
        params: Simulation parameters (cell size, tolerance, iteration cap)

    Returns:
        ShapeField with phi <= 0 on the wet cells

    Raises:
        StalledDynamicsError: If no cell is wet
        SolverError: If the iteration does not converge
    """
    if not mask.wet.any():
        raise StalledDynamicsError("No wet cell left to solve on")

    matrix, rhs, diagonal = _assemble(mask, params)
    preconditioner = sparse.diags(1.0 / diagonal)
    iterations = 0

    def count(_):
        nonlocal iterations
        iterations += 1

    # half the tolerance so the recomputed true residual still meets it
    psi, info = cg(matrix, rhs, rtol=0.5 * params.solver_tol, atol=0.0,
                   maxiter=params.max_iterations, M=preconditioner, callback=count)
    if info > 0:
        raise SolverError(f"Conjugate gradient did not converge in {info} iterations")
    if info < 0:
        raise SolverError(f"Conjugate gradient breakdown (info={info})")

    residual = float(np.linalg.norm(rhs - matrix @ psi) / np.linalg.norm(rhs))
    if residual > params.solver_tol:
        raise SolverError(f"Relative residual {residual:.3e} above tolerance {params.solver_tol:.1e}")

    phi = np.zeros(mask.wet.shape)
    phi[mask.wet] = -psi
    logger.debug(f"Shape solve: {matrix.shape[0]} unknowns, {iterations} iterations, residual {residual:.2e}")
    return ShapeField(phi, mask.face_x, mask.face_y, mask.wet_area(params), residual, iterations)


def gap_rate_from_balance(phi: ShapeField, mask: WetMask, h: float, params: SimParams) -> float:
    """
    Gap rate satisfying the force balance on the superstrate

    Integrating p - p_amb = p_hat - (cos1 + cos2)·sigma/h over the film and equating it
    to the external force gives
        (12 mu dh/dt / h³)·sum(phi)·cell_area = (cos1 + cos2)·sigma·A_wet/h + F_ext

    Raises:
        SolverError: If the shape integral vanishes or the wet area is empty
    """
    area = mask.wet_area(params)
    if area <= 0:
        raise SolverError("Force balance needs a positive wet area")
    integral = float(phi.phi.sum()) * params.cell_area
    if integral == 0.0:
        raise SolverError("Degenerate force balance: shape integral is zero")

    load = params.contact_angle_cos_sum * params.surface_tension * area / h + params.external_force
    return load * h ** 3 / (12.0 * params.viscosity * integral)


def pressure_field(phi: ShapeField, gap_rate: float, h: float, params: SimParams) -> PressureSolution:
    """Scale the shape function into the modified pressure"""
    scale = 12.0 * params.viscosity * gap_rate / h ** 3
    return PressureSolution(scale * phi.phi, gap_rate, phi.wet_area, phi.face_x, phi.face_y)
