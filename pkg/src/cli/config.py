"""
Run configuration: defaults, a flat ``key = value`` file, then command-line overrides.

    # comment
    n = 32
    eps = 0.2, 0.1, 0.05
    recipe = single-mode

Everything is validated before any computation starts.
"""

import math
from dataclasses import asdict, dataclass, fields, replace
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple, Union

from src.core.errors import ConfigurationError
from src.core.initial_data import InitialDataRecipe, RecipeId
from src.solvers.stepping import StepperConfig, step_count
from src.spectral import Grid

MIN_N = 16
MIN_EPSILONS = 3


class Mode(str, Enum):
    RUN_PE = "run-pe"
    RUN_SNS = "run-sns"
    CONVERGE = "converge"
    VERIFY = "verify"


@dataclass(frozen=True)
class RunConfig:
    mode: Mode = Mode.RUN_PE
    n: int = 32
    l1: float = 2.0 * math.pi
    l2: float = 2.0 * math.pi
    dealias_fraction: float = 2.0 / 3.0
    eps: Tuple[float, ...] = (0.2, 0.1, 0.05)
    dt: float = 5e-4
    t_final: float = 1.0
    output_every: int = 1
    recipe: RecipeId = RecipeId.SINGLE_MODE
    amplitude: float = 1.0
    seed: int = 42
    cfl_safety: float = 0.5
    workers: int = 1
    fft_workers: int = 1
    checkpoint: bool = False
    out: str = "out"

    @property
    def grid(self) -> Grid:
        return Grid.cube(
            self.n,
            self.l1,
            self.l2,
            dealias_fraction=self.dealias_fraction,
            fft_workers=self.fft_workers,
        )

    @property
    def initial_recipe(self) -> InitialDataRecipe:
        return InitialDataRecipe(recipe=self.recipe, amplitude=self.amplitude, seed=self.seed)

    @property
    def stepper(self) -> StepperConfig:
        return StepperConfig(dt=self.dt, cfl_safety=self.cfl_safety)

    @property
    def steps(self) -> int:
        return step_count(self.t_final, self.dt)

    def as_dict(self) -> Dict[str, Any]:
        """Plain values with sorted keys, as echoed in the manifest."""
        out = {}
        for key, value in sorted(asdict(self).items()):
            if isinstance(value, Enum):
                value = value.value
            elif isinstance(value, tuple):
                value = list(value)
            out[key] = value
        return out


_FIELDS = {f.name: f for f in fields(RunConfig)}


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_eps(text: str) -> Tuple[float, ...]:
    return tuple(float(part) for part in text.split(",") if part.strip())


_PARSERS = {
    'mode': Mode,
    'n': int,
    'l1': float,
    'l2': float,
    'dealias_fraction': float,
    'eps': _parse_eps,
    'dt': float,
    't_final': float,
    'output_every': int,
    'recipe': RecipeId,
    'amplitude': float,
    'seed': int,
    'cfl_safety': float,
    'workers': int,
    'fft_workers': int,
    'checkpoint': _parse_bool,
    'out': str,
}


def _convert(key: str, value: Any, line: Optional[int]) -> Any:
    if key not in _FIELDS:
        raise ConfigurationError(f"unknown key {key!r}", line=line)
    if key == 'eps' and isinstance(value, (list, tuple)):
        return tuple(float(e) for e in value)
    if not isinstance(value, str):
        return value
    try:
        return _PARSERS[key](value.strip())
    except ValueError:
        raise ConfigurationError(f"invalid value for {key}: {value.strip()!r}", line=line)


def read_config_file(path: Union[str, Path]) -> Dict[str, Tuple[Any, int]]:
    """Parse ``key = value`` lines into {key: (value, line number)}."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ConfigurationError(f"cannot read config file {path}: {e.strerror}")
    entries: Dict[str, Tuple[Any, int]] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"expected 'key = value', got {line!r}", line=number)
        key, value = (part.strip() for part in line.split("=", 1))
        if key in entries:
            raise ConfigurationError(f"duplicate key {key!r}", line=number)
        entries[key] = (_convert(key, value, number), number)
    return entries


def _validate(cfg: RunConfig, lines: Mapping[str, int]):
    def fail(key: str, message: str):
        raise ConfigurationError(message, line=lines.get(key))

    if cfg.n % 2 or cfg.n < MIN_N:
        fail('n', f"n must be an even integer >= {MIN_N}, got {cfg.n}")
    for key in ('dt', 't_final', 'l1', 'l2', 'amplitude'):
        value = getattr(cfg, key)
        if not (value > 0 and math.isfinite(value)):
            fail(key, f"{key} must be positive")
    if not (0.0 < cfg.dealias_fraction <= 1.0):
        fail('dealias_fraction', "dealias_fraction must lie in (0, 1]")
    if not (0.0 < cfg.cfl_safety <= 1.0):
        fail('cfl_safety', "cfl_safety must lie in (0, 1]")
    for key in ('output_every', 'workers', 'fft_workers'):
        if getattr(cfg, key) < 1:
            fail(key, f"{key} must be at least 1")
    if not cfg.eps or any(not (e > 0 and math.isfinite(e)) for e in cfg.eps):
        fail('eps', "eps values must be positive")
    if any(b >= a for a, b in zip(cfg.eps, cfg.eps[1:])):
        fail('eps', "eps values must be strictly decreasing")
    if cfg.mode is Mode.CONVERGE and len(cfg.eps) < MIN_EPSILONS:
        fail('eps', "need ≥ 3 epsilons")
    try:
        cfg.steps
    except ConfigurationError as e:
        fail('t_final', str(e))


def parse_config(
    path: Optional[Union[str, Path]] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> RunConfig:
    """
    Build a validated RunConfig.

    Args:
        path: optional ``key = value`` file
        overrides: values from the command line; ``None`` entries are ignored

    Raises:
        ConfigurationError: unknown keys, unparsable values or failed validation,
            with the offending line when it came from the file
    """
    values: Dict[str, Any] = {}
    lines: Dict[str, int] = {}
    if path is not None:
        for key, (value, number) in read_config_file(path).items():
            values[key] = value
            lines[key] = number
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        values[key] = _convert(key, value, None)
        lines.pop(key, None)
    cfg = replace(RunConfig(), **values)
    object.__setattr__(cfg, 'mode', Mode(cfg.mode))
    object.__setattr__(cfg, 'recipe', RecipeId(cfg.recipe))
    _validate(cfg, lines)
    return cfg
