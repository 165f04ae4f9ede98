"""
Admissible initial horizontal velocities.

Every recipe returns v0 that is even in z, has zero mean and satisfies
grad_H . int_{-1}^{1} v0 dz = 0.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Tuple

import numpy as np

from src.core.errors import ConfigurationError, DegenerateDataError
from src.core.state import PeState, make_admissible
from src.spectral import Grid, SpectralField, fft3, random_band_limited


class RecipeId(str, Enum):
    SINGLE_MODE = "single-mode"
    RANDOM = "random"


@dataclass(frozen=True)
class InitialDataRecipe:
    """
    Named recipe for v0.

    single-mode: v0 = A (sin(2 pi m2 y / L2) cos(pi m3 z), sin(2 pi m1 x / L1) cos(pi m3 z))
    random:      seeded band-limited field (index cube up to ``max_mode``) projected onto
                 the admissible set, scaled to RMS ``amplitude``
    """

    recipe: RecipeId = RecipeId.SINGLE_MODE
    amplitude: float = 1.0
    modes: Tuple[int, int, int] = (1, 1, 1)
    seed: int = 42
    max_mode: int = 3

    def __post_init__(self):
        object.__setattr__(self, 'recipe', RecipeId(self.recipe))
        if not math.isfinite(self.amplitude):
            raise ConfigurationError("amplitude must be finite")
        if any(int(m) != m or m < 0 for m in self.modes):
            raise ConfigurationError("mode indices must be non-negative integers")


def make_initial_data(recipe: InitialDataRecipe, grid: Grid) -> PeState:
    if recipe.recipe is RecipeId.SINGLE_MODE:
        v = _single_mode(recipe, grid)
    else:
        v = _random(recipe, grid)
    v = make_admissible(v)
    if not np.any(np.abs(v.coefficients) > 0.0):
        raise DegenerateDataError(f"recipe {recipe.recipe.value} produced a zero field")
    return PeState(v=v, t=0.0)


def _single_mode(recipe: InitialDataRecipe, grid: Grid) -> SpectralField:
    m1, m2, m3 = recipe.modes
    x, y, z = grid.points()
    vertical = np.cos(math.pi * m3 * z)
    v1 = np.sin(2.0 * math.pi * m2 * y / grid.l2) * vertical
    v2 = np.sin(2.0 * math.pi * m1 * x / grid.l1) * vertical
    values = recipe.amplitude * np.stack(np.broadcast_arrays(v1, v2))
    return SpectralField(fft3(values, grid), grid)


def _random(recipe: InitialDataRecipe, grid: Grid) -> SpectralField:
    return random_band_limited(
        grid, recipe.seed, max_mode=recipe.max_mode, components=2, rms=recipe.amplitude
    )
