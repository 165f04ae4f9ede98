"""
Reference incompressible Navier-Stokes solver on the same box.

Rotational form u x omega with the standard Leray projection, as in classical
triply periodic pseudo-spectral codes. With eps = 1 the scaled system reduces to
this one, which makes it an independent check of the anisotropic pressure solve.
"""

import numpy as np

from src.solvers.nonlinear import max_speed
from src.solvers.stepping import (
    StepperConfig,
    cfl_substeps,
    ensure_finite,
    if_rk2,
    integrating_factor,
)
from src.spectral import Grid, fft3, ifft3


def _curl(uh: np.ndarray, grid: Grid) -> np.ndarray:
    kx, ky, kz = grid.wavenumbers
    return 1j * np.stack(
        [
            ky * uh[2] - kz * uh[1],
            kz * uh[0] - kx * uh[2],
            kx * uh[1] - ky * uh[0],
        ]
    )


def _cross(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.stack(
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    )


def leray_project(uh: np.ndarray, grid: Grid) -> np.ndarray:
    """u - k (k . u) / |k|^2, mean mode removed."""
    kx, ky, kz = grid.wavenumbers
    k2 = grid.k_squared
    safe = np.where(k2 == 0.0, 1.0, k2)
    dot = (kx * uh[0] + ky * uh[1] + kz * uh[2]) / safe
    out = np.stack([uh[0] - kx * dot, uh[1] - ky * dot, uh[2] - kz * dot])
    out[..., 0, 0, 0] = 0.0
    return out


def isotropic_rhs(uh: np.ndarray, grid: Grid) -> np.ndarray:
    """P(u x omega), dealiased."""
    u = ifft3(uh, grid)
    omega = ifft3(_curl(uh, grid), grid)
    nonlinear = np.where(grid.dealias_mask, fft3(_cross(u, omega), grid), 0.0)
    return leray_project(nonlinear, grid)


def isotropic_step(
    uh: np.ndarray, grid: Grid, cfg: StepperConfig, step_index: int = 0
) -> np.ndarray:
    def tendency(y: np.ndarray) -> np.ndarray:
        if not cfg.nonlinear:
            return np.zeros_like(y)
        return isotropic_rhs(y, grid)

    def project(y: np.ndarray) -> np.ndarray:
        return leray_project(np.where(grid.dealias_mask, y, 0.0), grid)

    count = 1
    if cfg.nonlinear:
        count = cfl_substeps(max_speed(ifft3(uh, grid)), grid, cfg.dt, cfg.cfl_safety, step_index)
    h = cfg.dt / count
    factor = integrating_factor(grid, h)
    for _ in range(count):
        uh = if_rk2(uh, tendency, factor, h, project)
    ensure_finite(uh, step_index, 0.0)
    return uh
