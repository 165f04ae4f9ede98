"""Spectral module - periodic grid, Fourier transforms, derivatives and norms."""

from src.spectral.fields import (
    Axis,
    NormKind,
    Parity,
    PhysicalField,
    SpectralField,
    dealias,
    derivative,
    fft3,
    gradient,
    horizontal_gradient_norm,
    ifft3,
    laplacian,
    norm,
    random_band_limited,
    reflect_z,
    sobolev_seminorm,
    transform_forward,
    transform_inverse,
)
from src.spectral.grid import Grid, lambda1

__all__ = [
    'Axis',
    'Grid',
    'NormKind',
    'Parity',
    'PhysicalField',
    'SpectralField',
    'dealias',
    'derivative',
    'fft3',
    'gradient',
    'horizontal_gradient_norm',
    'ifft3',
    'lambda1',
    'laplacian',
    'norm',
    'random_band_limited',
    'reflect_z',
    'sobolev_seminorm',
    'transform_forward',
    'transform_inverse',
]
