"""
Periodic box geometry for Omega = (0, L1) x (0, L2) x (-1, 1).

The z direction is treated as periodic with period 2; collocation points in z
start at z = -1 so that z = 0 is the grid point with index n3 // 2.
"""

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import ClassVar, Tuple

import numpy as np

from src.core.errors import ConfigurationError

DEFAULT_DEALIAS_FRACTION = 2.0 / 3.0


@dataclass(frozen=True)
class Grid:
    """Collocation counts, periods and wavenumber tables of the periodic box."""

    n1: int
    n2: int
    n3: int
    l1: float = 2.0 * math.pi
    l2: float = 2.0 * math.pi
    dealias_fraction: float = DEFAULT_DEALIAS_FRACTION
    # Threads handed to scipy.fft; results do not depend on it.
    fft_workers: int = field(default=1, compare=False)

    LZ: ClassVar[float] = 2.0

    def __post_init__(self):
        for name, n in (("n1", self.n1), ("n2", self.n2), ("n3", self.n3)):
            if int(n) != n or n <= 0 or n % 2:
                raise ConfigurationError(f"{name} must be a positive even integer, got {n}")
        if not (self.l1 > 0 and self.l2 > 0):
            raise ConfigurationError("horizontal periods l1, l2 must be positive")
        if not (0.0 < self.dealias_fraction <= 1.0):
            raise ConfigurationError("dealias_fraction must lie in (0, 1]")
        if self.fft_workers < 1:
            raise ConfigurationError("fft_workers must be at least 1")

    @classmethod
    def cube(cls, n: int, l1: float = 2.0 * math.pi, l2: float = 2.0 * math.pi, **kwargs) -> "Grid":
        """Grid with the same collocation count on every axis."""
        return cls(n, n, n, l1, l2, **kwargs)

    @property
    def shape(self) -> Tuple[int, int, int]:
        return (self.n1, self.n2, self.n3)

    @property
    def size(self) -> int:
        return self.n1 * self.n2 * self.n3

    @property
    def volume(self) -> float:
        """|Omega| = 2 L1 L2."""
        return self.LZ * self.l1 * self.l2

    @property
    def area(self) -> float:
        """|M| = L1 L2."""
        return self.l1 * self.l2

    @property
    def spacing(self) -> Tuple[float, float, float]:
        return (self.l1 / self.n1, self.l2 / self.n2, self.LZ / self.n3)

    @cached_property
    def mode_indices(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Integer mode indices per axis in FFT order, broadcastable to the grid shape."""
        i1 = np.fft.fftfreq(self.n1, 1.0 / self.n1).round().astype(int)
        i2 = np.fft.fftfreq(self.n2, 1.0 / self.n2).round().astype(int)
        i3 = np.fft.fftfreq(self.n3, 1.0 / self.n3).round().astype(int)
        return (i1[:, None, None], i2[None, :, None], i3[None, None, :])

    @cached_property
    def wavenumbers(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(2 pi k1 / L1, 2 pi k2 / L2, pi k3), broadcastable to the grid shape."""
        i1, i2, i3 = self.mode_indices
        return (
            2.0 * math.pi * i1 / self.l1,
            2.0 * math.pi * i2 / self.l2,
            math.pi * i3.astype(float),
        )

    @cached_property
    def k_squared(self) -> np.ndarray:
        kx, ky, kz = self.wavenumbers
        return kx**2 + ky**2 + kz**2

    @cached_property
    def kh_squared(self) -> np.ndarray:
        kx, ky, _ = self.wavenumbers
        return kx**2 + ky**2

    @cached_property
    def dealias_cutoffs(self) -> Tuple[int, int, int]:
        return tuple(int(math.floor(self.dealias_fraction * n / 2)) for n in self.shape)

    @cached_property
    def dealias_mask(self) -> np.ndarray:
        """True for retained modes: every |k_i index| <= floor(fraction * N_i / 2)."""
        c1, c2, c3 = self.dealias_cutoffs
        i1, i2, i3 = self.mode_indices
        return (np.abs(i1) <= c1) & (np.abs(i2) <= c2) & (np.abs(i3) <= c3)

    def points(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Collocation coordinates (x, y, z), broadcastable to the grid shape."""
        x = np.arange(self.n1) * (self.l1 / self.n1)
        y = np.arange(self.n2) * (self.l2 / self.n2)
        z = -1.0 + np.arange(self.n3) * (self.LZ / self.n3)
        return (x[:, None, None], y[None, :, None], z[None, None, :])

    def refined(self, factor: int = 2) -> "Grid":
        """Same box with every collocation count multiplied by ``factor``."""
        return Grid(
            self.n1 * factor,
            self.n2 * factor,
            self.n3 * factor,
            self.l1,
            self.l2,
            self.dealias_fraction,
            self.fft_workers,
        )


def lambda1(grid: Grid) -> float:
    """
    First eigenvalue of -Laplacian on mean-zero periodic functions of Omega.

    Every term of |k|^2 is non-negative and a nonzero index vector has at least one
    unit-or-larger entry, so the minimum is attained on a coordinate unit vector.
    """
    return min(
        (2.0 * math.pi / grid.l1) ** 2,
        (2.0 * math.pi / grid.l2) ** 2,
        (2.0 * math.pi / grid.LZ) ** 2,
    )
