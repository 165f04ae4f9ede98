"""
Spectral and physical field containers plus the Fourier machinery on a Grid.

Coefficients use the "forward" normalisation: the (0, 0, 0) coefficient is the
mean of the field and cos(2 pi x / L1) has two coefficients of 1/2. Vector
fields stack their components along a leading axis; every operation here
broadcasts over leading axes.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

import numpy as np
import scipy.fft as spfft

from src.core.errors import ConfigurationError, InvalidStateError
from src.spectral.grid import Grid

_AXES = (-3, -2, -1)


class Parity(str, Enum):
    """Symmetry of a field under z -> -z."""

    EVEN = "even"
    ODD = "odd"
    NONE = "none"

    @property
    def flipped(self) -> "Parity":
        if self is Parity.EVEN:
            return Parity.ODD
        if self is Parity.ODD:
            return Parity.EVEN
        return Parity.NONE


class Axis(str, Enum):
    X = "x"
    Y = "y"
    Z = "z"


class NormKind(str, Enum):
    L2 = "L2"
    L4 = "L4"
    H1_SEMINORM = "H1-seminorm"
    GRAD_L2 = "L2-of-gradient"
    H1 = "H1"


def _check_shape(array: np.ndarray, grid: Grid):
    if array.ndim < 3 or tuple(array.shape[-3:]) != grid.shape:
        raise ConfigurationError(
            f"field shape {array.shape} does not conform to grid {grid.shape}"
        )


@dataclass(frozen=True, eq=False)
class SpectralField:
    """Fourier coefficients indexed by (k1, k2, k3) in FFT order."""

    coefficients: np.ndarray
    grid: Grid
    parity: Parity = Parity.NONE

    def __post_init__(self):
        _check_shape(self.coefficients, self.grid)

    @property
    def components(self) -> int:
        """Number of stacked components (1 for a scalar field)."""
        return int(np.prod(self.coefficients.shape[:-3], dtype=int))

    def __getitem__(self, index: int) -> "SpectralField":
        return SpectralField(self.coefficients[index], self.grid, self.parity)

    def replace(self, coefficients: np.ndarray, parity: Optional[Parity] = None) -> "SpectralField":
        return SpectralField(coefficients, self.grid, self.parity if parity is None else parity)

    def __add__(self, other: "SpectralField") -> "SpectralField":
        parity = self.parity if self.parity == other.parity else Parity.NONE
        return SpectralField(self.coefficients + other.coefficients, self.grid, parity)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        parity = self.parity if self.parity == other.parity else Parity.NONE
        return SpectralField(self.coefficients - other.coefficients, self.grid, parity)

    def __mul__(self, scalar: float) -> "SpectralField":
        return SpectralField(self.coefficients * scalar, self.grid, self.parity)

    __rmul__ = __mul__

    @classmethod
    def zeros(
        cls, grid: Grid, components: int = 0, parity: Parity = Parity.NONE
    ) -> "SpectralField":
        shape = grid.shape if components == 0 else (components,) + grid.shape
        return cls(np.zeros(shape, dtype=complex), grid, parity)


@dataclass(frozen=True, eq=False)
class PhysicalField:
    """Real values on the collocation points."""

    values: np.ndarray
    grid: Grid

    def __post_init__(self):
        _check_shape(self.values, self.grid)
        if not np.all(np.isfinite(self.values)):
            raise InvalidStateError("physical field contains NaN or Inf values")


def fft3(values: np.ndarray, grid: Grid) -> np.ndarray:
    """Forward transform over the three trailing axes."""
    return spfft.fftn(values, axes=_AXES, norm="forward", workers=grid.fft_workers)


def ifft3(coefficients: np.ndarray, grid: Grid) -> np.ndarray:
    """Inverse transform over the three trailing axes, real part only."""
    return spfft.ifftn(coefficients, axes=_AXES, norm="forward", workers=grid.fft_workers).real


def reflect_z(coefficients: np.ndarray) -> np.ndarray:
    """Coefficients of f(x, y, -z): the k3 index is negated."""
    return np.roll(np.flip(coefficients, axis=-1), 1, axis=-1)


def transform_forward(f: PhysicalField) -> SpectralField:
    return SpectralField(fft3(f.values, f.grid), f.grid)


def transform_inverse(f: SpectralField) -> PhysicalField:
    return PhysicalField(ifft3(f.coefficients, f.grid), f.grid)


def derivative(f: SpectralField, axis: Union[Axis, str]) -> SpectralField:
    """Spectral derivative; a z derivative flips the parity tag."""
    axis = Axis(axis)
    k = f.grid.wavenumbers[("x", "y", "z").index(axis.value)]
    parity = f.parity.flipped if axis is Axis.Z else f.parity
    return SpectralField(1j * k * f.coefficients, f.grid, parity)


def gradient(f: SpectralField) -> SpectralField:
    """Stack (d/dx, d/dy, d/dz) along a new leading axis."""
    kx, ky, kz = f.grid.wavenumbers
    c = f.coefficients
    return SpectralField(1j * np.stack([kx * c, ky * c, kz * c]), f.grid, Parity.NONE)


def laplacian(f: SpectralField) -> SpectralField:
    return f.replace(-f.grid.k_squared * f.coefficients)


def dealias(f: SpectralField) -> SpectralField:
    return f.replace(np.where(f.grid.dealias_mask, f.coefficients, 0.0))


def sobolev_seminorm(f: SpectralField, order: int) -> float:
    """||grad^order f||_2 = sqrt(|Omega| sum |k|^(2 order) |f_k|^2)."""
    weight = f.grid.k_squared**order if order else 1.0
    return float(np.sqrt(f.grid.volume * np.sum(weight * np.abs(f.coefficients) ** 2)))


def horizontal_gradient_norm(f: SpectralField) -> float:
    """||grad_H f||_2."""
    return float(
        np.sqrt(f.grid.volume * np.sum(f.grid.kh_squared * np.abs(f.coefficients) ** 2))
    )


def norm(f: Union[SpectralField, PhysicalField], kind: Union[NormKind, str] = NormKind.L2) -> float:
    """
    L^q and Sobolev norms on Omega.

    L2 uses Parseval on the coefficients, L4 a collocation power sum of the
    dealiased physical field, and the gradient norms spectral derivatives.
    Vector fields are measured through their pointwise Euclidean magnitude.
    """
    kind = NormKind(kind)
    if isinstance(f, PhysicalField):
        f = transform_forward(f)
    grid = f.grid
    if kind is NormKind.L2:
        return sobolev_seminorm(f, 0)
    if kind is NormKind.H1_SEMINORM:
        return sobolev_seminorm(f, 1)
    if kind is NormKind.GRAD_L2:
        return sobolev_seminorm(gradient(f), 0)
    if kind is NormKind.H1:
        return float(np.hypot(sobolev_seminorm(f, 0), sobolev_seminorm(f, 1)))
    values = ifft3(dealias(f).coefficients, grid)
    if values.ndim > 3:
        magnitude_sq = np.sum(values.reshape((-1,) + grid.shape) ** 2, axis=0)
    else:
        magnitude_sq = values**2
    return float((grid.volume * np.mean(magnitude_sq**2)) ** 0.25)


def random_band_limited(
    grid: Grid,
    seed: int,
    max_mode: int = 3,
    components: int = 0,
    rms: float = 1.0,
    parity: Union[Parity, str] = Parity.NONE,
) -> SpectralField:
    """
    Seeded real band-limited field independent of the resolution.

    Coefficients are drawn on the index cube |k_i| <= max_mode with a 1/(1+|k|^2)
    envelope and embedded into the grid, so the same seed yields the same
    function on any grid whose dealias mask contains the cube. The result is
    scaled to ||f||_2 = rms * sqrt(|Omega|) and has zero mean.
    """
    cutoff = min(grid.dealias_cutoffs)
    if max_mode > cutoff:
        raise ConfigurationError(
            f"max_mode {max_mode} exceeds the dealias cutoff {cutoff} of the grid"
        )
    rng = np.random.default_rng(seed)
    count = max(components, 1)
    side = 2 * max_mode + 1
    draw = rng.standard_normal((count, side, side, side, 2))
    small = draw[..., 0] + 1j * draw[..., 1]

    idx = np.arange(-max_mode, max_mode + 1)
    k1, k2, k3 = np.meshgrid(
        2.0 * np.pi * idx / grid.l1, 2.0 * np.pi * idx / grid.l2, np.pi * idx, indexing="ij"
    )
    small = small / (1.0 + k1**2 + k2**2 + k3**2)

    coefficients = np.zeros((count,) + grid.shape, dtype=complex)
    rows = idx % grid.n1
    cols = idx % grid.n2
    slabs = idx % grid.n3
    coefficients[:, rows[:, None, None], cols[None, :, None], slabs[None, None, :]] = small
    coefficients = 0.5 * (coefficients + np.conj(_reflect_all(coefficients)))
    coefficients[..., 0, 0, 0] = 0.0
    parity = Parity(parity)
    if parity is not Parity.NONE:
        sign = 1.0 if parity is Parity.EVEN else -1.0
        coefficients = 0.5 * (coefficients + sign * reflect_z(coefficients))

    current = np.sqrt(grid.volume * np.sum(np.abs(coefficients) ** 2))
    coefficients *= rms * np.sqrt(grid.volume) / current
    if components == 0:
        coefficients = coefficients[0]
    return SpectralField(coefficients, grid, parity)


def _reflect_all(coefficients: np.ndarray) -> np.ndarray:
    """Coefficients at -k on every axis."""
    out = coefficients
    for axis in _AXES:
        out = np.roll(np.flip(out, axis=axis), 1, axis=axis)
    return out
