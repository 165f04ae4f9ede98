"""
Empirical checks of the anisotropic Ladyzhenskaya-type inequalities.

The constants of the inequalities are not explicit, so every check reports the
ratio LHS / RHS with the constant left out. Integrals are evaluated with
Parseval sums on band-limited fields, which is exact as long as the fields live
inside the dealias mask.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Tuple, Union

import numpy as np

from src.core.errors import InputError, NumericalInconsistencyError
from src.core.state import diagnostic_w, make_admissible
from src.spectral import (
    Grid,
    SpectralField,
    fft3,
    horizontal_gradient_norm,
    ifft3,
    random_band_limited,
    sobolev_seminorm,
)

logger = logging.getLogger(__name__)


class InequalityId(str, Enum):
    LEMMA21_A = "Lemma2.1-a"
    LEMMA21_B = "Lemma2.1-b"
    LEMMA22 = "Lemma2.2"


@dataclass(frozen=True)
class RatioReport:
    """Largest observed LHS / RHS-without-constant over a family of fields."""

    inequality: InequalityId
    max_ratio: float
    family: str
    ratios: Tuple[float, ...] = ()

    def __post_init__(self):
        if not self.max_ratio >= 0.0:
            raise InputError(f"ratio must be non-negative, got {self.max_ratio}")

    @property
    def count(self) -> int:
        return len(self.ratios)


def _check_scalar(*fields: SpectralField):
    for f in fields:
        if f.coefficients.ndim != 3:
            raise InputError("inequality checks take scalar fields")
        if not np.all(np.isfinite(f.coefficients)):
            raise InputError("inequality checks need finite fields")


def _ratio(lhs: float, rhs: float) -> float:
    if rhs == 0.0:
        if lhs == 0.0:
            return 0.0
        raise NumericalInconsistencyError(f"right-hand side vanishes but LHS = {lhs:.3e}")
    return lhs / rhs


def _half(f: SpectralField) -> float:
    """||f||^{1/2} (||f||^{1/2} + ||grad_H f||^{1/2})."""
    l2 = sobolev_seminorm(f, 0)
    return np.sqrt(l2) * (np.sqrt(l2) + np.sqrt(horizontal_gradient_norm(f)))


def ladyzhenskaya_ratio(
    f: SpectralField,
    g: SpectralField,
    h: SpectralField,
    variant: str = "a",
) -> float:
    """
    |int_M (int f dz)(int g h dz) dxdy| divided by

        a: ||f||^{1/2}(||f||^{1/2} + ||grad_H f||^{1/2}) ||g|| ||h||^{1/2}(...)
        b: ||f|| ||g||^{1/2}(||g||^{1/2} + ||grad_H g||^{1/2}) ||h||^{1/2}(...)

    Raises:
        NumericalInconsistencyError: the right-hand side vanishes while the left does not
    """
    if variant not in ("a", "b"):
        raise InputError(f"unknown variant {variant!r}")
    _check_scalar(f, g, h)
    grid = f.grid
    # int_{-1}^{1} q dz has coefficients 2 q_hat(k1, k2, 0).
    vertical_f = 2.0 * f.coefficients[..., 0]
    gh = fft3(ifft3(g.coefficients, grid) * ifft3(h.coefficients, grid), grid)
    vertical_gh = 2.0 * gh[..., 0]
    lhs = abs(float(grid.area * np.sum(vertical_f * np.conj(vertical_gh)).real))

    if variant == "a":
        rhs = _half(f) * sobolev_seminorm(g, 0) * _half(h)
    else:
        rhs = sobolev_seminorm(f, 0) * _half(g) * _half(h)
    return _ratio(lhs, float(rhs))


def lemma22_ratio(v: SpectralField, phi: SpectralField, psi: SpectralField) -> float:
    """
    |int (varphi . grad phi) psi| divided by
    ||grad varphi_H||^{1/2} ||Laplacian varphi_H||^{1/2} ||grad phi||^{1/2}
    ||Laplacian phi||^{1/2} ||psi||, with varphi = (v, w(v)) and w the
    hydrostatic vertical velocity of the admissible v.
    """
    _check_scalar(phi, psi)
    grid = v.grid
    w = diagnostic_w(v)
    velocity = ifft3(np.concatenate([v.coefficients, w.coefficients[None]]), grid)
    kx, ky, kz = grid.wavenumbers
    c = phi.coefficients
    grad_phi = ifft3(1j * np.stack([kx * c, ky * c, kz * c]), grid)
    advection = fft3(np.sum(velocity * grad_phi, axis=0), grid)
    advection = np.where(grid.dealias_mask, advection, 0.0)
    lhs = abs(float(grid.volume * np.sum(advection * np.conj(psi.coefficients)).real))

    rhs = (
        np.sqrt(sobolev_seminorm(v, 1) * sobolev_seminorm(v, 2))
        * np.sqrt(sobolev_seminorm(phi, 1) * sobolev_seminorm(phi, 2))
        * sobolev_seminorm(psi, 0)
    )
    return _ratio(lhs, float(rhs))


def _member(inequality: InequalityId, grid: Grid, seed: int, max_mode: int) -> float:
    if inequality is InequalityId.LEMMA22:
        v = make_admissible(random_band_limited(grid, seed, max_mode, components=2))
        phi = random_band_limited(grid, seed + 1, max_mode)
        psi = random_band_limited(grid, seed + 2, max_mode)
        return lemma22_ratio(v, phi, psi)
    f, g, h = (random_band_limited(grid, seed + j, max_mode) for j in range(3))
    return ladyzhenskaya_ratio(f, g, h, "a" if inequality is InequalityId.LEMMA21_A else "b")


def ratio_family(
    inequality: Union[InequalityId, str],
    grid: Grid,
    count: int = 100,
    seed: int = 0,
    max_mode: int = 3,
) -> RatioReport:
    """Max ratio over ``count`` seeded random band-limited members."""
    inequality = InequalityId(inequality)
    if count < 1:
        raise InputError("a ratio family needs at least one member")
    ratios = tuple(_member(inequality, grid, seed + 3 * i, max_mode) for i in range(count))
    family = f"random band-limited, max_mode={max_mode}, seeds {seed}..{seed + 3 * count - 1}"
    return RatioReport(inequality, max(ratios), family, ratios)


def refinement_change(
    inequality: Union[InequalityId, str],
    grid: Grid,
    count: int = 100,
    seed: int = 0,
    max_mode: int = 3,
) -> float:
    """Relative change of the family max ratio when every axis is refined twofold."""
    coarse = ratio_family(inequality, grid, count, seed, max_mode)
    fine = ratio_family(inequality, grid.refined(2), count, seed, max_mode)
    if coarse.max_ratio == 0.0:
        return 0.0 if fine.max_ratio == 0.0 else float("inf")
    change = abs(fine.max_ratio - coarse.max_ratio) / coarse.max_ratio
    logger.info(
        "%s: max ratio %.6g at N=%d, %.6g at N=%d",
        coarse.inequality.value,
        coarse.max_ratio,
        grid.n1,
        fine.max_ratio,
        grid.n1 * 2,
    )
    return change
