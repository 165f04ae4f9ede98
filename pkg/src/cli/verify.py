"""
Property suite run by the ``verify`` subcommand.

Every check returns a CheckResult; the suite never stops at the first failure so
the manifest lists the full picture.
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import Callable, List, Optional

import numpy as np

from src.cli.config import RunConfig
from src.core.errors import BlowUpError
from src.core.initial_data import RecipeId, make_initial_data
from src.core.state import (
    PeState,
    SnsState,
    diagnostic_w,
    make_admissible,
    sns_initial_state,
)
from src.diagnostics.budgets import BudgetMonitor
from src.diagnostics.energy import energy_audit_pe, energy_audit_sns
from src.diagnostics.inequalities import InequalityId, refinement_change
from src.solvers.driver import run_pe, run_sns
from src.solvers.isotropic import isotropic_step
from src.solvers.pe import pe_pressure_solve, pe_step
from src.solvers.sns import sns_step
from src.solvers.stepping import StepperConfig, step_count
from src.spectral import (
    Axis,
    Grid,
    Parity,
    PhysicalField,
    SpectralField,
    derivative,
    fft3,
    lambda1,
    norm,
    random_band_limited,
    transform_forward,
    transform_inverse,
)

logger = logging.getLogger(__name__)

ROUND_OFF_TOL = 1e-12
PRESSURE_TOL = 1e-10
ENERGY_RESIDUAL_TOL = 1e-4
DECAY_TOL = 1e-3
SNS_SLACK_TOL = 1e-4
PARITY_TOL = 1e-10
DIVERGENCE_TOL = 1e-10
BAROTROPIC_TOL = 1e-9
ORACLE_TOL = 1e-8
ORACLE_HORIZON = 0.1
RICHARDSON_MIN_ORDER = 1.9
RICHARDSON_HORIZON = 0.1
RATIO_CHANGE_TOL = 0.05
RATIO_FAMILY_SIZE = 100
RATIO_BASE_N = 16


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    value: float
    threshold: float
    detail: str = ""


def _at_most(name: str, value: float, threshold: float, detail: str = "") -> CheckResult:
    return CheckResult(name, bool(value <= threshold), float(value), threshold, detail)


def _at_least(name: str, value: float, threshold: float, detail: str = "") -> CheckResult:
    return CheckResult(name, bool(value >= threshold), float(value), threshold, detail)


def check_round_trip(grid: Grid) -> List[CheckResult]:
    f = random_band_limited(grid, seed=7, components=2)
    values = transform_inverse(f)
    back = transform_forward(values)
    error = np.max(np.abs(back.coefficients - f.coefficients)) / np.max(np.abs(f.coefficients))
    quadrature = math.sqrt(grid.volume * np.mean(np.sum(values.values**2, axis=0)))
    parseval = abs(quadrature - norm(f)) / norm(f)
    return [
        _at_most("spectral_round_trip", error, ROUND_OFF_TOL),
        _at_most("parseval", parseval, ROUND_OFF_TOL),
    ]


def check_derivative(grid: Grid) -> CheckResult:
    x, y, z = grid.points()
    values = np.sin(2.0 * math.pi * x / grid.l1) * np.cos(math.pi * z) + 0.0 * y
    exact = -math.pi * np.sin(2.0 * math.pi * x / grid.l1) * np.sin(math.pi * z) + 0.0 * y
    f = transform_forward(PhysicalField(values, grid))
    dz = transform_inverse(derivative(f, Axis.Z)).values
    return _at_most("spectral_derivative", float(np.max(np.abs(dz - exact))), ROUND_OFF_TOL)


def check_diagnostic_w(grid: Grid) -> CheckResult:
    """v = (cos(2 pi x / L1) cos(pi z), 0) has w = (2 pi / L1) sin(2 pi x / L1) sin(pi z) / pi."""
    x, y, z = grid.points()
    kx = 2.0 * math.pi / grid.l1
    v1 = np.cos(kx * x) * np.cos(math.pi * z) + 0.0 * y
    values = np.stack([v1, np.zeros_like(v1)])
    v = SpectralField(fft3(values, grid), grid, Parity.EVEN)
    exact = kx * np.sin(kx * x) * np.sin(math.pi * z) / math.pi + 0.0 * y
    w = transform_inverse(diagnostic_w(v)).values
    return _at_most("diagnostic_w_oracle", float(np.max(np.abs(w - exact))), ROUND_OFF_TOL)


def check_pe_pressure(config: RunConfig) -> CheckResult:
    """For the single-mode recipe on a 2 pi box, p = A^2 cos x cos y / 2."""
    recipe = replace(config.initial_recipe, recipe=RecipeId.SINGLE_MODE)
    grid = Grid.cube(config.n, dealias_fraction=config.dealias_fraction)
    p = pe_pressure_solve(make_initial_data(recipe, grid)).physical()
    x, y, _ = grid.points()
    exact = 0.5 * recipe.amplitude**2 * np.cos(x[:, :, 0]) * np.cos(y[:, :, 0])
    return _at_most("pe_pressure_oracle", float(np.max(np.abs(p - exact))), PRESSURE_TOL)


def check_heat_kernel(grid: Grid) -> CheckResult:
    """Without advection a single mode decays exactly like exp(-|k|^2 t)."""
    x, y, z = grid.points()
    v1 = np.sin(2.0 * math.pi * y / grid.l2) * np.cos(math.pi * z) + 0.0 * x
    v = make_admissible(SpectralField(fft3(np.stack([v1, np.zeros_like(v1)]), grid), grid))
    cfg = StepperConfig(dt=0.01, nonlinear=False)
    state = PeState(v)
    for n in range(10):
        state = pe_step(state, cfg, n + 1)
    k2 = (2.0 * math.pi / grid.l2) ** 2 + math.pi**2
    error = norm(state.v - v * math.exp(-k2 * 0.1)) / norm(v)
    return _at_most("heat_kernel", error, ROUND_OFF_TOL)


def check_pe_run(config: RunConfig, status_callback=None) -> List[CheckResult]:
    grid = config.grid
    trajectory = run_pe(
        make_initial_data(config.initial_recipe, grid),
        config.stepper,
        config.t_final,
        config.output_every,
        status_callback=status_callback,
    )
    audit = energy_audit_pe(trajectory, lambda1(grid))
    bound = (1.0 + DECAY_TOL) * np.exp(-2.0 * lambda1(grid) * audit.times) * audit.initial_energy
    decay_excess = float(np.max(audit.energy - bound))
    monitor = BudgetMonitor()
    for record in trajectory.records:
        monitor.update(record)
    growth = max(monitor.growth().values())
    records = trajectory.records
    return [
        _at_most("pe_energy_identity", audit.relative_residual(), ENERGY_RESIDUAL_TOL),
        _at_most("pe_decay_bound", decay_excess, 0.0),
        _at_most("pe_budget_growth", growth, monitor.growth_limit, ", ".join(monitor.unbounded())),
        _at_most("pe_parity", max(r["invariant_parity"] for r in records), PARITY_TOL),
        _at_most("pe_barotropic", max(r["invariant_barotropic"] for r in records), BAROTROPIC_TOL),
        _at_most("pe_mean", max(r["invariant_mean"] for r in records), 0.0),
    ]


def check_sns_runs(config: RunConfig, status_callback=None) -> List[CheckResult]:
    grid = config.grid
    pe = make_initial_data(config.initial_recipe, grid)
    results = []
    for eps in config.eps:
        trajectory = run_sns(
            sns_initial_state(pe, eps),
            config.stepper,
            config.t_final,
            config.output_every,
            status_callback=status_callback,
        )
        audit = energy_audit_sns(trajectory, eps)
        records = trajectory.records
        parity = max(max(r["invariant_parity_v"], r["invariant_parity_w"]) for r in records)
        results += [
            _at_least(
                f"sns_energy_inequality_eps{eps:g}",
                float(np.min(audit.slack)) / audit.initial_energy,
                -SNS_SLACK_TOL,
            ),
            _at_most(
                f"sns_divergence_eps{eps:g}",
                max(r["invariant_divergence"] for r in records),
                DIVERGENCE_TOL,
            ),
            _at_most(f"sns_parity_eps{eps:g}", parity, PARITY_TOL),
            _at_most(f"sns_mean_eps{eps:g}", max(r["invariant_mean"] for r in records), 0.0),
        ]
    return results


def check_isotropic_oracle(config: RunConfig) -> CheckResult:
    """The eps = 1 scaled system against the rotational-form Leray solver."""
    grid = config.grid
    cfg = config.stepper
    sns = sns_initial_state(make_initial_data(config.initial_recipe, grid), 1.0)
    uh = sns.stacked()
    scale = math.sqrt(grid.volume * np.sum(np.abs(uh) ** 2))
    for n in range(1, step_count(ORACLE_HORIZON, cfg.dt) + 1):
        sns = sns_step(sns, cfg, n)
        uh = isotropic_step(uh, grid, cfg, n)
    error = math.sqrt(grid.volume * np.sum(np.abs(sns.stacked() - uh) ** 2)) / scale
    return _at_most("isotropic_oracle_eps1", error, ORACLE_TOL)


def _richardson(step: Callable, state, horizon: float) -> float:
    """Observed order from runs at dt, dt/2 and dt/4 with dt = horizon / 10."""
    finals = []
    for level in range(3):
        dt = horizon / (10 * 2**level)
        cfg = StepperConfig(dt=dt)
        current = state
        for n in range(1, step_count(horizon, dt) + 1):
            current = step(current, cfg, n)
        finals.append(current)

    def coefficients(s):
        return s.stacked() if isinstance(s, SnsState) else s.v.coefficients

    e1 = np.linalg.norm(coefficients(finals[0]) - coefficients(finals[1]))
    e2 = np.linalg.norm(coefficients(finals[1]) - coefficients(finals[2]))
    if e2 == 0.0:
        return math.inf
    return math.log2(e1 / e2)


def check_richardson(config: RunConfig) -> List[CheckResult]:
    grid = config.grid
    pe = make_initial_data(config.initial_recipe, grid)
    eps = config.eps[0]
    return [
        _at_least(
            "pe_temporal_order", _richardson(pe_step, pe, RICHARDSON_HORIZON), RICHARDSON_MIN_ORDER
        ),
        _at_least(
            f"sns_temporal_order_eps{eps:g}",
            _richardson(sns_step, sns_initial_state(pe, eps), RICHARDSON_HORIZON),
            RICHARDSON_MIN_ORDER,
        ),
    ]


def check_ratio_refinement() -> List[CheckResult]:
    grid = Grid.cube(RATIO_BASE_N)
    return [
        _at_most(
            f"ratio_refinement_{inequality.value}",
            refinement_change(inequality, grid, RATIO_FAMILY_SIZE),
            RATIO_CHANGE_TOL,
        )
        for inequality in InequalityId
    ]


def run_property_suite(
    config: RunConfig,
    status_callback: Optional[Callable[[str], None]] = None,
) -> List[CheckResult]:
    """Run every property check; blow-ups are reported as failed checks."""
    grid = config.grid
    stages = [
        ("round trip", lambda: check_round_trip(grid)),
        ("derivative", lambda: [check_derivative(grid)]),
        ("diagnostic w", lambda: [check_diagnostic_w(grid)]),
        ("PE pressure", lambda: [check_pe_pressure(config)]),
        ("heat kernel", lambda: [check_heat_kernel(grid)]),
        ("PE run", lambda: check_pe_run(config, status_callback)),
        ("SNS runs", lambda: check_sns_runs(config, status_callback)),
        ("isotropic oracle", lambda: [check_isotropic_oracle(config)]),
        ("Richardson", lambda: check_richardson(config)),
        ("inequality ratios", check_ratio_refinement),
    ]
    results: List[CheckResult] = []
    for label, stage in stages:
        if status_callback:
            status_callback(f"verify: {label}")
        try:
            results.extend(stage())
        except BlowUpError as e:
            results.append(CheckResult(label, False, math.nan, math.nan, str(e)))
    for result in results:
        level = logging.INFO if result.passed else logging.ERROR
        status = "ok" if result.passed else "FAILED"
        logger.log(
            level, "%s: %s (%.3e vs %.3e)", result.name, status, result.value, result.threshold
        )
    return results
