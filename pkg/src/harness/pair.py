"""
Lockstep PE / SNS runs from shared initial data.

Both solvers use the same grid, dt and output cadence, so V = v_eps - v and
W = w_eps - w(v) are formed directly on the common collocation grid.
"""

import logging
from typing import Callable, Dict, Optional, Union

import numpy as np

from src.core.errors import BlowUpError
from src.core.initial_data import InitialDataRecipe, make_initial_data
from src.core.state import PeState, SnsState, sns_initial_state, w_coefficients
from src.harness.report import DiffReport
from src.solvers.pe import pe_step
from src.solvers.sns import sns_step
from src.solvers.stepping import StepperConfig, step_count
from src.spectral import Grid

logger = logging.getLogger(__name__)

InitialData = Union[InitialDataRecipe, PeState]


def _weighted(c: np.ndarray, weight, volume: float) -> float:
    return float(np.sqrt(volume * np.sum(weight * np.abs(c) ** 2)))


def difference_norms(
    dv: np.ndarray,
    dw: np.ndarray,
    eps: float,
    grid: Grid,
) -> Dict[str, float]:
    """Norms of (V, W) given their coefficients; eps weights the W terms."""
    k2 = grid.k_squared
    vol = grid.volume
    w_l2 = _weighted(dw, 1.0, vol)
    v_l2 = _weighted(dv, 1.0, vol)
    grad_v = _weighted(dv, k2, vol)
    return {
        "V_l2": v_l2,
        "eps_W_l2": eps * w_l2,
        "grad_V_l2": grad_v,
        "eps_grad_W_l2": eps * _weighted(dw, k2, vol),
        "W_l2": w_l2,
        "V_h1": float(np.hypot(v_l2, grad_v)),
        "lap_V_l2": _weighted(dv, k2**2, vol),
        "eps_lap_W_l2": eps * _weighted(dw, k2**2, vol),
        "grad_lap_V_l2": _weighted(dv, k2**3, vol),
        "eps_grad_lap_W_l2": eps * _weighted(dw, k2**3, vol),
    }


def resolve_initial(initial: InitialData, grid: Grid) -> PeState:
    if isinstance(initial, PeState):
        return initial
    return make_initial_data(initial, grid)


def _report_status(callback: Optional[Callable[[str], None]], message: str):
    logger.info(message)
    if callback:
        callback(message)


def _energy(state: SnsState) -> tuple:
    grid = state.grid
    yh = state.stacked()
    weight = np.ones(3)[:, None, None, None]
    weight[2] = state.eps**2
    energy = grid.volume * np.sum(weight * np.abs(yh) ** 2)
    rate = grid.volume * np.sum(weight * grid.k_squared * np.abs(yh) ** 2)
    return float(energy), float(rate)


def run_pair(
    initial: InitialData,
    eps: float,
    grid: Grid,
    t_final: float,
    dt: float,
    output_every: int = 1,
    cfl_safety: float = 0.5,
    nonlinear: bool = True,
    status_callback: Optional[Callable[[str], None]] = None,
) -> DiffReport:
    """
    Run PE and SNS side by side and record the difference norms.

    A blow-up in either solver ends the run; the report keeps every sample up
    to the last valid time and is flagged ``failed``. The report also carries the
    SNS energy-inequality slack E(0) - E(t) - 2 int D at each output time.
    """
    cfg = StepperConfig(dt=dt, cfl_safety=cfl_safety, nonlinear=nonlinear)
    steps = step_count(t_final, dt)
    pe = resolve_initial(initial, grid)
    sns = sns_initial_state(pe, eps)
    report = DiffReport(eps=eps)

    energy0, rate_prev = _energy(sns)
    dissipation = 0.0
    t_prev = pe.t

    def sample(pe_state: PeState, sns_state: SnsState):
        nonlocal dissipation, rate_prev, t_prev
        dv = sns_state.v.coefficients - pe_state.v.coefficients
        dw = sns_state.w.coefficients - w_coefficients(pe_state.v.coefficients, grid)
        energy, rate = _energy(sns_state)
        dissipation += (sns_state.t - t_prev) * (rate + rate_prev)
        rate_prev, t_prev = rate, sns_state.t
        report.energy_slack.append(energy0 - energy - dissipation)
        report.append(pe_state.t, difference_norms(dv, dw, eps, grid))

    sample(pe, sns)
    t0 = pe.t
    for n in range(1, steps + 1):
        try:
            pe = pe_step(pe, cfg, n)
            sns = sns_step(sns, cfg, n)
        except BlowUpError as e:
            report.failed = True
            report.message = str(e)
            _report_status(status_callback, f"eps={eps:g}: {e}")
            return report
        t = t0 + n * dt
        pe = PeState(v=pe.v, t=t)
        sns = SnsState(v=sns.v, w=sns.w, eps=eps, t=t)
        if n % output_every == 0 or n == steps:
            sample(pe, sns)
    _report_status(status_callback, f"eps={eps:g}: pair run reached t={t0 + steps * dt:g}")
    return report


def estimate_error_floor(
    initial: InitialData,
    grid: Grid,
    t_final: float,
    dt: float,
    output_every: int = 1,
    cfl_safety: float = 0.5,
    status_callback: Optional[Callable[[str], None]] = None,
) -> DiffReport:
    """
    PE at dt against PE at dt/2, sampled at the same output times.

    The difference stands in for the discretization error present in every
    eps run; it is reported with eps = 0.
    """
    coarse_cfg = StepperConfig(dt=dt, cfl_safety=cfl_safety)
    fine_cfg = StepperConfig(dt=0.5 * dt, cfl_safety=cfl_safety)
    steps = step_count(t_final, dt)
    coarse = fine = resolve_initial(initial, grid)
    report = DiffReport(eps=0.0)

    def sample(a: PeState, b: PeState):
        va, vb = a.v.coefficients, b.v.coefficients
        dw = w_coefficients(va, grid) - w_coefficients(vb, grid)
        report.append(a.t, difference_norms(va - vb, dw, 0.0, grid))

    sample(coarse, fine)
    t0 = coarse.t
    for n in range(1, steps + 1):
        try:
            coarse = pe_step(coarse, coarse_cfg, n)
            fine = pe_step(pe_step(fine, fine_cfg, 2 * n - 1), fine_cfg, 2 * n)
        except BlowUpError as e:
            report.failed = True
            report.message = str(e)
            _report_status(status_callback, f"error floor run: {e}")
            return report
        t = t0 + n * dt
        coarse = PeState(v=coarse.v, t=t)
        fine = PeState(v=fine.v, t=t)
        if n % output_every == 0 or n == steps:
            sample(coarse, fine)
    _report_status(status_callback, "error floor estimated")
    return report
