"""
Primitive equations: prognostic v, diagnostic w and 2D pressure p(x, y, t).

    dt v + (v . grad_H) v + w dz v - Laplacian v + grad_H p = 0,
    grad_H . v + dz w = 0,    dz p = 0.
"""

from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from src.core.errors import InvalidStateError
from src.core.state import (
    BAROTROPIC_HARD_TOL,
    PeState,
    admissible_coefficients,
    barotropic_residual,
    w_coefficients,
)
from src.solvers.nonlinear import advect, max_speed
from src.solvers.stepping import (
    PeStepperConfig,
    cfl_substeps,
    ensure_finite,
    if_rk2,
    integrating_factor,
)
from src.spectral import Grid, Parity, SpectralField, fft3, ifft3


@dataclass(frozen=True, eq=False)
class PePressure:
    """Mean-zero pressure on M, coefficients indexed by (k1, k2)."""

    coefficients: np.ndarray
    grid: Grid

    def physical(self) -> np.ndarray:
        return np.fft.ifft2(self.coefficients, norm="forward").real


def _horizontal_wavenumbers(grid: Grid) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    kx, ky, _ = grid.wavenumbers
    kx2, ky2 = kx[:, :, 0], ky[:, :, 0]
    return kx2, ky2, kx2**2 + ky2**2


def _invert_horizontal_laplacian(rhs: np.ndarray, kh2: np.ndarray) -> np.ndarray:
    """Solve |k_H|^2 p = rhs with the (0, 0) mode set to zero."""
    safe = np.where(kh2 == 0.0, 1.0, kh2)
    return np.where(kh2 == 0.0, 0.0, rhs / safe)


def _velocity(vh: np.ndarray, grid: Grid) -> np.ndarray:
    return ifft3(np.concatenate([vh, w_coefficients(vh, grid)[None]]), grid)


def pe_pressure_solve(v: Union[SpectralField, PeState]) -> PePressure:
    """
    -Laplacian_H p = (1/2) int_{-1}^{1} grad_H . grad_H . (v (x) v) dz.

    The vertical average is the k3 = 0 slab of the dealiased products.
    """
    if isinstance(v, PeState):
        v = v.v
    grid = v.grid
    kx2, ky2, kh2 = _horizontal_wavenumbers(grid)
    values = ifft3(v.coefficients, grid)
    mean = {}
    for i, j in ((0, 0), (0, 1), (1, 1)):
        product = fft3(values[i] * values[j], grid)
        mean[i, j] = np.where(grid.dealias_mask, product, 0.0)[..., 0]
    rhs = -(kx2**2 * mean[0, 0] + 2.0 * kx2 * ky2 * mean[0, 1] + ky2**2 * mean[1, 1])
    return PePressure(_invert_horizontal_laplacian(rhs, kh2), grid)


def _pe_tendency(vh: np.ndarray, grid: Grid) -> Tuple[np.ndarray, np.ndarray]:
    """Advection plus barotropic pressure gradient; returns (tendency, pressure)."""
    kx2, ky2, kh2 = _horizontal_wavenumbers(grid)
    n = advect(_velocity(vh, grid), vh, grid)
    mean = n[..., 0]
    p_hat = _invert_horizontal_laplacian(1j * (kx2 * mean[0] + ky2 * mean[1]), kh2)
    tendency = -n
    tendency[0, :, :, 0] -= 1j * kx2 * p_hat
    tendency[1, :, :, 0] -= 1j * ky2 * p_hat
    return tendency, p_hat


def _check_barotropic(state: PeState):
    residual = barotropic_residual(state.v)
    if residual > BAROTROPIC_HARD_TOL:
        raise InvalidStateError(f"barotropic condition violated: {residual:.3e}")


def pe_rhs(state: PeState) -> SpectralField:
    """-(v . grad_H) v - w dz v - grad_H p, without the diffusion term."""
    _check_barotropic(state)
    tendency, _ = _pe_tendency(state.v.coefficients, state.grid)
    return SpectralField(tendency, state.grid, Parity.EVEN)


def pe_time_derivative(state: PeState, nonlinear: bool = True) -> SpectralField:
    """Full dt v including diffusion, used by the a priori budget monitors."""
    grid = state.grid
    vh = state.v.coefficients
    total = -grid.k_squared * vh
    if nonlinear:
        total = total + _pe_tendency(vh, grid)[0]
    return SpectralField(total, grid, Parity.EVEN)


def pe_step(state: PeState, cfg: PeStepperConfig, step_index: int = 0) -> PeState:
    """
    One IMEX step of the primitive equations.

    The output is re-projected onto band-limited, even, mean-zero,
    barotropically divergence-free fields.
    """
    grid = state.grid
    vh = state.v.coefficients

    def tendency(y: np.ndarray) -> np.ndarray:
        if not cfg.nonlinear:
            return np.zeros_like(y)
        return _pe_tendency(y, grid)[0]

    def project(y: np.ndarray) -> np.ndarray:
        return admissible_coefficients(y, grid)

    count = 1
    if cfg.nonlinear:
        count = cfl_substeps(
            max_speed(_velocity(vh, grid)), grid, cfg.dt, cfg.cfl_safety, step_index
        )
    h = cfg.dt / count
    factor = integrating_factor(grid, h)
    for _ in range(count):
        vh = if_rk2(vh, tendency, factor, h, project)
    ensure_finite(vh, step_index, state.t + cfg.dt)
    return PeState(v=SpectralField(vh, grid, Parity.EVEN), t=state.t + cfg.dt)
