"""Dealiased advection kernel shared by the PE and SNS right-hand sides."""

import numpy as np

from src.spectral import Grid, fft3, ifft3


def advect(u: np.ndarray, gh: np.ndarray, grid: Grid) -> np.ndarray:
    """
    Coefficients of (u . grad) g, truncated to the dealias mask.

    ``u`` holds the three physical velocity components, ``gh`` the spectral
    coefficients of the advected components stacked along axis 0.
    """
    kx, ky, kz = grid.wavenumbers
    grads = ifft3(1j * np.stack([kx * gh, ky * gh, kz * gh]), grid)
    product = u[0] * grads[0] + u[1] * grads[1] + u[2] * grads[2]
    return np.where(grid.dealias_mask, fft3(product, grid), 0.0)


def max_speed(u: np.ndarray) -> float:
    """max |u| over the collocation points."""
    return float(np.sqrt(np.max(np.sum(u**2, axis=0))))
