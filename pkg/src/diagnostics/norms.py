"""
Norm suite for PE and SNS states.

Every record carries the quantities that appear on the left-hand sides of the
a priori estimates for the primitive equations (energy, L4, dz v, grad v,
Laplacian v and the time derivative), plus the eps-weighted w analogues for
the scaled Navier-Stokes system.
"""

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, Iterable, List, Optional, Tuple, Union

import numpy as np

from src.core.errors import InvalidStateError
from src.core.state import PeState, SnsState, divergence_3d
from src.spectral import NormKind, SpectralField, dealias, gradient, ifft3, norm


class Units(str, Enum):
    ENERGY = "energy"
    RATE = "rate"


@dataclass(frozen=True)
class ScalarDiagnostic:
    name: str
    value: float
    units: Units = Units.ENERGY


@dataclass(frozen=True)
class BudgetRecord:
    """Named diagnostics and identity/inequality residuals at time t."""

    t: float
    diagnostics: Tuple[ScalarDiagnostic, ...]
    residuals: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        bad = [d.name for d in self.diagnostics if not math.isfinite(d.value)]
        bad += [name for name, value in self.residuals.items() if not math.isfinite(value)]
        if bad or not math.isfinite(self.t):
            raise InvalidStateError(f"non-finite diagnostics at t={self.t}: {', '.join(bad)}")

    def __getitem__(self, name: str) -> float:
        for diagnostic in self.diagnostics:
            if diagnostic.name == name:
                return diagnostic.value
        if name in self.residuals:
            return self.residuals[name]
        raise KeyError(name)

    def get(self, name: str, default: float = 0.0) -> float:
        try:
            return self[name]
        except KeyError:
            return default

    @property
    def names(self) -> List[str]:
        return [d.name for d in self.diagnostics] + list(self.residuals)

    def with_residuals(self, **values: float) -> "BudgetRecord":
        return replace(self, residuals={**self.residuals, **values})

    def row(self, columns: Iterable[str]) -> List[float]:
        return [self.t if name == 't' else self[name] for name in columns]


def _weighted_norm(coefficients: np.ndarray, weight, volume: float) -> float:
    return float(np.sqrt(volume * np.sum(weight * np.abs(coefficients) ** 2)))


def _velocity_norms(v: SpectralField, prefix: str) -> List[ScalarDiagnostic]:
    grid = v.grid
    c = v.coefficients
    kz2 = grid.wavenumbers[2] ** 2
    k2 = grid.k_squared
    vol = grid.volume
    return [
        ScalarDiagnostic(f"{prefix}_l2", _weighted_norm(c, 1.0, vol)),
        ScalarDiagnostic(f"{prefix}_l4", norm(v, NormKind.L4)),
        ScalarDiagnostic(f"dz_{prefix}_l2", _weighted_norm(c, kz2, vol)),
        ScalarDiagnostic(f"grad_dz_{prefix}_l2", _weighted_norm(c, kz2 * k2, vol)),
        ScalarDiagnostic(f"grad_{prefix}_l2", _weighted_norm(c, k2, vol)),
        ScalarDiagnostic(f"lap_{prefix}_l2", _weighted_norm(c, k2**2, vol)),
        ScalarDiagnostic(f"grad_lap_{prefix}_l2", _weighted_norm(c, k2**3, vol)),
    ]


def magnitude_gradient_norm(v: SpectralField) -> float:
    """|| |v| |grad v| ||_2 by collocation quadrature of the dealiased fields."""
    grid = v.grid
    v = dealias(v)
    values = ifft3(v.coefficients, grid)
    grads = ifft3(gradient(v).coefficients, grid)
    speed_sq = np.sum(values**2, axis=0)
    grad_sq = np.sum(grads**2, axis=(0, 1))
    return float(np.sqrt(grid.volume * np.mean(speed_sq * grad_sq)))


def _time_derivative_norms(dv: SpectralField) -> List[ScalarDiagnostic]:
    grid = dv.grid
    c = dv.coefficients
    vol = grid.volume
    return [
        ScalarDiagnostic("dt_v_l2", _weighted_norm(c, 1.0, vol), Units.RATE),
        ScalarDiagnostic("grad_dt_v_l2", _weighted_norm(c, grid.k_squared, vol), Units.RATE),
    ]


def norm_suite(
    state: Union[PeState, SnsState],
    time_derivative: Optional[SpectralField] = None,
) -> BudgetRecord:
    """
    ||v||_2, ||v||_4, ||dz v||_2, ||grad dz v||_2, ||grad v||_2, ||Laplacian v||_2,
    ||grad Laplacian v||_2 and || |v||grad v| ||_2; dt v norms when the time
    derivative is supplied; w, eps w and divergence norms for SNS states.
    """
    diagnostics = _velocity_norms(state.v, "v")
    diagnostics.append(ScalarDiagnostic("v_grad_v_l2", magnitude_gradient_norm(state.v)))
    if time_derivative is not None:
        diagnostics.extend(_time_derivative_norms(time_derivative))

    if isinstance(state, SnsState):
        grid = state.grid
        wc = state.w.coefficients
        w_l2 = _weighted_norm(wc, 1.0, grid.volume)
        grad_w_l2 = _weighted_norm(wc, grid.k_squared, grid.volume)
        div = divergence_3d(state.v, state.w).coefficients
        diagnostics.extend(
            [
                ScalarDiagnostic("w_l2", w_l2),
                ScalarDiagnostic("grad_w_l2", grad_w_l2),
                ScalarDiagnostic("eps_w_l2", state.eps * w_l2),
                ScalarDiagnostic("eps_grad_w_l2", state.eps * grad_w_l2),
                ScalarDiagnostic("divergence_l2", _weighted_norm(div, 1.0, grid.volume)),
            ]
        )
    return BudgetRecord(t=state.t, diagnostics=tuple(diagnostics))
