"""
IMEX time stepping shared by the PE, SNS and isotropic solvers.

Diffusion -Laplacian (unit viscosity) is integrated exactly through the factor
exp(-|k|^2 dt); the remaining tendency is advanced with the two-stage
integrating-factor Runge-Kutta (Heun) scheme:

    y*      = E (y + dt F(y))
    y_{n+1} = E y + dt/2 (E F(y) + F(y*))
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from src.core.errors import BlowUpError, ConfigurationError
from src.spectral import Grid

# Smallest admissible CFL sub-step.
MIN_DT = 1e-8

Tendency = Callable[[np.ndarray], np.ndarray]
Projection = Callable[[np.ndarray], np.ndarray]


class Scheme(str, Enum):
    IMEX_RK2 = "IMEX-RK2"


@dataclass(frozen=True)
class StepperConfig:
    """Time step, scheme and CFL safety factor of a solver."""

    dt: float
    scheme: Scheme = Scheme.IMEX_RK2
    cfl_safety: float = 0.5
    # False drops the advection/pressure tendency and leaves the heat equation.
    nonlinear: bool = True

    def __post_init__(self):
        object.__setattr__(self, 'scheme', Scheme(self.scheme))
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ConfigurationError("dt must be positive")
        if not (0.0 < self.cfl_safety <= 1.0):
            raise ConfigurationError("cfl_safety must lie in (0, 1]")


PeStepperConfig = StepperConfig
SnsStepperConfig = StepperConfig


def integrating_factor(grid: Grid, dt: float) -> np.ndarray:
    return np.exp(-grid.k_squared * dt)


def if_rk2(
    y: np.ndarray,
    tendency: Tendency,
    factor: np.ndarray,
    dt: float,
    project: Projection,
) -> np.ndarray:
    """One integrating-factor Heun step; ``project`` is applied to both stages."""
    k1 = tendency(y)
    y_star = project(factor * (y + dt * k1))
    k2 = tendency(y_star)
    return project(factor * y + 0.5 * dt * (factor * k1 + k2))


def cfl_substeps(
    max_speed: float, grid: Grid, dt: float, safety: float, step_index: int = 0
) -> int:
    """
    Number of equal sub-steps so that each satisfies
    h <= safety * min(dx, dy, dz) / max|u|.
    """
    if not math.isfinite(max_speed):
        raise BlowUpError("non-finite velocity", step=step_index)
    if max_speed == 0.0:
        return 1
    limit = safety * min(grid.spacing) / max_speed
    count = max(1, math.ceil(dt / limit - 1e-12))
    if dt / count < MIN_DT:
        raise BlowUpError(
            f"CFL step {dt / count:.3e} fell below {MIN_DT:.0e} (max|u| = {max_speed:.3e})",
            step=step_index,
        )
    return count


def ensure_finite(y: np.ndarray, step_index: int, t: float):
    if not np.all(np.isfinite(y)):
        raise BlowUpError("NaN or Inf in the solution", step=step_index, t=t)


def step_count(t_final: float, dt: float) -> int:
    """Number of steps of size dt that reach t_final."""
    if not t_final > 0:
        raise ConfigurationError("t_final must be positive")
    steps = int(round(t_final / dt))
    if steps < 1 or abs(steps * dt - t_final) > 1e-9 * max(t_final, 1.0):
        raise ConfigurationError(f"t_final {t_final} is not a multiple of dt {dt}")
    return steps
