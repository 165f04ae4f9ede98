"""
Scaled anisotropic Navier-Stokes system on the fixed domain Omega.

    dt v + (u . grad) v - Laplacian v + grad_H p = 0,
    grad_H . v + dz w = 0,
    eps^2 (dt w + u . grad w - Laplacian w) + dz p = 0,

with the last equation divided through by eps^2 before stepping.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from src.core.errors import ConfigurationError
from src.core.state import SnsState, sns_admissible_coefficients
from src.solvers.nonlinear import advect, max_speed
from src.solvers.stepping import (
    SnsStepperConfig,
    cfl_substeps,
    ensure_finite,
    if_rk2,
    integrating_factor,
)
from src.spectral import Grid, Parity, SpectralField, ifft3


@dataclass(frozen=True, eq=False)
class SnsPressure:
    """Mean-zero 3D pressure p_eps."""

    field: SpectralField

    @property
    def coefficients(self) -> np.ndarray:
        return self.field.coefficients


def anisotropic_operator(grid: Grid, eps: float) -> np.ndarray:
    """|k_H|^2 + k3^2 / eps^2."""
    _, _, kz = grid.wavenumbers
    return grid.kh_squared + kz**2 / eps**2


def _pressure_coefficients(n: np.ndarray, grid: Grid, eps: float) -> np.ndarray:
    """Mode-wise solve of (|k_H|^2 + k3^2/eps^2) p = i (k_H . N_v + k3 N_w)."""
    kx, ky, kz = grid.wavenumbers
    rhs = 1j * (kx * n[0] + ky * n[1] + kz * n[2])
    operator = anisotropic_operator(grid, eps)
    safe = np.where(operator == 0.0, 1.0, operator)
    return np.where(operator == 0.0, 0.0, rhs / safe)


def _nonlinear(yh: np.ndarray, grid: Grid) -> np.ndarray:
    return advect(ifft3(yh, grid), yh, grid)


def _sns_tendency(yh: np.ndarray, grid: Grid, eps: float) -> Tuple[np.ndarray, np.ndarray]:
    kx, ky, kz = grid.wavenumbers
    n = _nonlinear(yh, grid)
    p_hat = _pressure_coefficients(n, grid, eps)
    tendency = -n
    tendency[0] -= 1j * kx * p_hat
    tendency[1] -= 1j * ky * p_hat
    tendency[2] -= 1j * kz * p_hat / eps**2
    return tendency, p_hat


def sns_pressure_solve(
    v: SpectralField,
    w: SpectralField,
    eps: float,
    tendencies: Optional[np.ndarray] = None,
) -> SnsPressure:
    """
    Pressure that makes the momentum tendency divergence-free.

    ``tendencies`` are the stacked advection terms ((u . grad) v, u . grad w); they
    are computed from (v, w) when omitted.
    """
    if not eps > 0:
        raise ConfigurationError(f"eps must be positive, got {eps}")
    grid = v.grid
    if tendencies is None:
        tendencies = _nonlinear(np.concatenate([v.coefficients, w.coefficients[None]]), grid)
    return SnsPressure(SpectralField(_pressure_coefficients(tendencies, grid, eps), grid))


def sns_rhs(state: SnsState) -> Tuple[SpectralField, SpectralField]:
    """(-(u . grad) v - grad_H p, -(u . grad) w - eps^-2 dz p), without diffusion."""
    grid = state.grid
    tendency, _ = _sns_tendency(state.stacked(), grid, state.eps)
    ensure_finite(tendency, 0, state.t)
    return (
        SpectralField(tendency[:2], grid, Parity.EVEN),
        SpectralField(tendency[2], grid, Parity.ODD),
    )


def sns_time_derivative(state: SnsState, nonlinear: bool = True) -> np.ndarray:
    """Stacked dt (v, w) including diffusion."""
    grid = state.grid
    yh = state.stacked()
    total = -grid.k_squared * yh
    if nonlinear:
        total = total + _sns_tendency(yh, grid, state.eps)[0]
    return total


def sns_step(state: SnsState, cfg: SnsStepperConfig, step_index: int = 0) -> SnsState:
    """One IMEX step; output re-projected onto parity, zero mean and incompressibility."""
    grid = state.grid
    eps = state.eps
    yh = state.stacked()

    def tendency(y: np.ndarray) -> np.ndarray:
        if not cfg.nonlinear:
            return np.zeros_like(y)
        return _sns_tendency(y, grid, eps)[0]

    def project(y: np.ndarray) -> np.ndarray:
        return sns_admissible_coefficients(y, grid, eps)

    count = 1
    if cfg.nonlinear:
        count = cfl_substeps(max_speed(ifft3(yh, grid)), grid, cfg.dt, cfg.cfl_safety, step_index)
    h = cfg.dt / count
    factor = integrating_factor(grid, h)
    for _ in range(count):
        yh = if_rk2(yh, tendency, factor, h, project)
    ensure_finite(yh, step_index, state.t + cfg.dt)
    return SnsState(
        v=SpectralField(yh[:2], grid, Parity.EVEN),
        w=SpectralField(yh[2], grid, Parity.ODD),
        eps=eps,
        t=state.t + cfg.dt,
    )
