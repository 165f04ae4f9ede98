"""
Velocity state containers and the symmetry, divergence and projection operators.

Horizontal velocity v is stored as a two-component SpectralField (even in z),
vertical velocity w as a scalar SpectralField (odd in z).
"""

import logging
from dataclasses import dataclass
from typing import Union

import numpy as np

from src.core.errors import ConfigurationError, InvalidStateError
from src.spectral import Grid, Parity, SpectralField, reflect_z

logger = logging.getLogger(__name__)

# Hard limit for the barotropic condition before diagnostic_w refuses the input.
BAROTROPIC_HARD_TOL = 1e-8
# Monitored tolerances for structural invariants.
DIVERGENCE_TOL = 1e-10
PARITY_TOL = 1e-10
BAROTROPIC_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class PeState:
    """Prognostic horizontal velocity of the primitive equations."""

    v: SpectralField
    t: float = 0.0

    @property
    def grid(self) -> Grid:
        return self.v.grid


@dataclass(frozen=True, eq=False)
class SnsState:
    """Prognostic (v_eps, w_eps) of the scaled Navier-Stokes system."""

    v: SpectralField
    w: SpectralField
    eps: float
    t: float = 0.0

    def __post_init__(self):
        if not self.eps > 0:
            raise ConfigurationError(f"eps must be positive, got {self.eps}")

    @property
    def grid(self) -> Grid:
        return self.v.grid

    def stacked(self) -> np.ndarray:
        """(v1, v2, w) coefficients along a leading axis."""
        return np.concatenate([self.v.coefficients, self.w.coefficients[None]])


def parity_coefficients(coefficients: np.ndarray, parity: Parity) -> np.ndarray:
    reflected = reflect_z(coefficients)
    if Parity(parity) is Parity.EVEN:
        return 0.5 * (coefficients + reflected)
    if Parity(parity) is Parity.ODD:
        return 0.5 * (coefficients - reflected)
    raise ValueError("parity projection needs EVEN or ODD")


def parity_project(f: SpectralField, parity: Union[Parity, str]) -> SpectralField:
    """Even or odd part (f(z) +- f(-z)) / 2, computed in coefficient space."""
    parity = Parity(parity)
    return f.replace(parity_coefficients(f.coefficients, parity), parity)


def parity_deviation(f: SpectralField, parity: Union[Parity, str]) -> float:
    """Relative L2 size of the part of f with the opposite parity."""
    parity = Parity(parity)
    total = np.linalg.norm(f.coefficients)
    if total == 0.0:
        return 0.0
    wrong = parity_coefficients(f.coefficients, parity.flipped)
    return float(np.linalg.norm(wrong) / total)


def divergence_h_coefficients(vh: np.ndarray, grid: Grid) -> np.ndarray:
    kx, ky, _ = grid.wavenumbers
    return 1j * (kx * vh[0] + ky * vh[1])


def divergence_H(v: SpectralField) -> SpectralField:
    """grad_H . v; keeps the z-parity of v."""
    return SpectralField(divergence_h_coefficients(v.coefficients, v.grid), v.grid, v.parity)


def divergence_3d(v: SpectralField, w: SpectralField) -> SpectralField:
    """grad_H . v + dz w; even when v is even and w is odd."""
    _, _, kz = v.grid.wavenumbers
    coefficients = divergence_h_coefficients(v.coefficients, v.grid) + 1j * kz * w.coefficients
    parity = Parity.EVEN if (v.parity, w.parity) == (Parity.EVEN, Parity.ODD) else Parity.NONE
    return SpectralField(coefficients, v.grid, parity)


def barotropic_residual(v: SpectralField) -> float:
    """||grad_H . int_{-1}^{1} v dz||_{L2(M)}."""
    grid = v.grid
    slab = 2.0 * divergence_h_coefficients(v.coefficients, grid)[..., 0]
    return float(np.sqrt(grid.area * np.sum(np.abs(slab) ** 2)))


def w_coefficients(vh: np.ndarray, grid: Grid) -> np.ndarray:
    """Odd antiderivative in z of -grad_H . v; the k3 = 0 slab is dropped."""
    _, _, kz = grid.wavenumbers
    div = divergence_h_coefficients(vh, grid)
    safe = np.where(kz == 0.0, 1.0, kz)
    wh = np.where(kz == 0.0, 0.0, 1j * div / safe)
    return parity_coefficients(wh, Parity.ODD)


def diagnostic_w(v: SpectralField) -> SpectralField:
    """
    w = -int_0^z grad_H . v dz', the hydrostatic vertical velocity.

    Raises InvalidStateError when the barotropic condition fails, since the
    antiderivative of a divergence with nonzero vertical mean is not periodic.
    """
    residual = barotropic_residual(v)
    if residual > BAROTROPIC_HARD_TOL:
        raise InvalidStateError(
            f"barotropic condition violated: ||div_H int v dz|| = {residual:.3e}"
        )
    return SpectralField(w_coefficients(v.coefficients, v.grid), v.grid, Parity.ODD)


def barotropic_coefficients(vh: np.ndarray, grid: Grid) -> np.ndarray:
    """Remove the horizontal gradient part of the vertical mean of v."""
    kx, ky, _ = grid.wavenumbers
    kx2, ky2 = kx[:, :, 0], ky[:, :, 0]
    kh2 = kx2**2 + ky2**2
    safe = np.where(kh2 == 0.0, 1.0, kh2)
    out = vh.copy()
    slab = out[..., 0]
    projection = (kx2 * slab[0] + ky2 * slab[1]) / safe
    slab[0] -= kx2 * projection
    slab[1] -= ky2 * projection
    return out


def barotropic_project(v: SpectralField) -> SpectralField:
    """v with grad_H . int_{-1}^{1} v dz removed, keeping everything else."""
    return v.replace(barotropic_coefficients(v.coefficients, v.grid))


def admissible_coefficients(vh: np.ndarray, grid: Grid) -> np.ndarray:
    """Band-limited, even in z, mean-zero and barotropically divergence-free."""
    out = np.where(grid.dealias_mask, vh, 0.0)
    out = parity_coefficients(out, Parity.EVEN)
    out[..., 0, 0, 0] = 0.0
    return barotropic_coefficients(out, grid)


def make_admissible(v: SpectralField) -> SpectralField:
    return v.replace(admissible_coefficients(v.coefficients, v.grid), Parity.EVEN)


def solenoidal_coefficients(yh: np.ndarray, grid: Grid, eps: float) -> np.ndarray:
    """
    Project stacked (v1, v2, w) onto grad_H . v + dz w = 0.

    The correction is -(grad_H phi, eps^-2 dz phi), the projection that is
    orthogonal in the scaled energy ||v||^2 + eps^2 ||w||^2.
    """
    kx, ky, kz = grid.wavenumbers
    div = 1j * (kx * yh[0] + ky * yh[1] + kz * yh[2])
    operator = grid.kh_squared + kz**2 / eps**2
    safe = np.where(operator == 0.0, 1.0, operator)
    phi = np.where(operator == 0.0, 0.0, -div / safe)
    out = yh.copy()
    out[0] -= 1j * kx * phi
    out[1] -= 1j * ky * phi
    out[2] -= 1j * kz * phi / eps**2
    return out


def solenoidal_project(v: SpectralField, w: SpectralField, eps: float):
    """Return the (v, w) pair projected onto the incompressible subspace."""
    stacked = np.concatenate([v.coefficients, w.coefficients[None]])
    out = solenoidal_coefficients(stacked, v.grid, eps)
    return v.replace(out[:2]), w.replace(out[2])


def sns_admissible_coefficients(yh: np.ndarray, grid: Grid, eps: float) -> np.ndarray:
    """Band limit, parity (v even, w odd), zero mean and incompressibility."""
    out = np.where(grid.dealias_mask, yh, 0.0)
    out[:2] = parity_coefficients(out[:2], Parity.EVEN)
    out[2] = parity_coefficients(out[2], Parity.ODD)
    out[..., 0, 0, 0] = 0.0
    return solenoidal_coefficients(out, grid, eps)


def sns_initial_state(pe: PeState, eps: float) -> SnsState:
    """Scaled Navier-Stokes data (v0, w0) with w0 from the hydrostatic relation."""
    return SnsState(v=pe.v, w=diagnostic_w(pe.v), eps=eps, t=pe.t)


def mean_mode(f: SpectralField) -> np.ndarray:
    return f.coefficients[..., 0, 0, 0]


def check_pe_state(state: PeState) -> dict:
    """Structural invariant measurements for a PE state."""
    v = state.v
    return {
        'parity': parity_deviation(v, Parity.EVEN),
        'mean': float(np.max(np.abs(mean_mode(v)))),
        'barotropic': barotropic_residual(v),
    }


def check_sns_state(state: SnsState) -> dict:
    """Structural invariant measurements for an SNS state."""
    div = divergence_3d(state.v, state.w)
    return {
        'parity_v': parity_deviation(state.v, Parity.EVEN),
        'parity_w': parity_deviation(state.w, Parity.ODD),
        'mean': float(max(np.max(np.abs(mean_mode(state.v))), abs(mean_mode(state.w)))),
        'divergence': float(np.sqrt(state.grid.volume * np.sum(np.abs(div.coefficients) ** 2))),
    }
