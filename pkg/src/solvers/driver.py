"""
Time loop shared by the PE and SNS solvers.

Output times are exactly ``t0 + step * dt``; a record is produced at step 0 and
after every ``output_every`` steps, plus the final step.
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Callable, List, Optional, Union

from src.core.errors import BlowUpError, ConfigurationError
from src.core.state import PeState, SnsState, check_pe_state, check_sns_state, parity_deviation
from src.diagnostics.norms import BudgetRecord, norm_suite
from src.solvers.pe import pe_step, pe_time_derivative
from src.solvers.sns import sns_pressure_solve, sns_step, sns_time_derivative
from src.solvers.stepping import StepperConfig, step_count
from src.spectral import Parity, SpectralField

logger = logging.getLogger(__name__)

State = Union[PeState, SnsState]
RecordSink = Callable[[BudgetRecord], None]


@dataclass
class Trajectory:
    """Output records of one run and the state reached at the last step."""

    records: List[BudgetRecord] = field(default_factory=list)
    final_state: Optional[State] = None
    steps: int = 0

    @property
    def times(self) -> List[float]:
        return [r.t for r in self.records]


def pe_record(state: PeState, nonlinear: bool = True) -> BudgetRecord:
    """Norm suite of a PE state with structural invariants as residuals."""
    record = norm_suite(state, pe_time_derivative(state, nonlinear))
    checks = check_pe_state(state)
    return record.with_residuals(**{f"invariant_{k}": v for k, v in checks.items()})


def sns_record(state: SnsState, nonlinear: bool = True) -> BudgetRecord:
    """Norm suite of an SNS state plus invariants and the parity of the pressure."""
    grid = state.grid
    dv = SpectralField(sns_time_derivative(state, nonlinear)[:2], grid, Parity.EVEN)
    record = norm_suite(state, dv)
    checks = check_sns_state(state)
    pressure = sns_pressure_solve(state.v, state.w, state.eps).field
    return record.with_residuals(
        pressure_parity=parity_deviation(pressure, Parity.EVEN),
        **{f"invariant_{k}": v for k, v in checks.items()},
    )


def _run(
    step: Callable[[State, StepperConfig, int], State],
    record: Callable[[State, bool], BudgetRecord],
    label: str,
    initial: State,
    cfg: StepperConfig,
    t_final: float,
    output_every: int,
    sink: Optional[RecordSink],
    status_callback: Optional[Callable[[str], None]],
) -> Trajectory:
    if output_every < 1:
        raise ConfigurationError("output_every must be at least 1")
    steps = step_count(t_final, cfg.dt)
    t0 = initial.t
    trajectory = Trajectory(final_state=initial)

    def emit(state: State):
        out = record(state, cfg.nonlinear)
        trajectory.records.append(out)
        if sink:
            sink(out)

    emit(initial)
    state = initial
    report_every = max(1, steps // 10)
    for n in range(1, steps + 1):
        try:
            state = step(state, cfg, n)
        except BlowUpError as e:
            _report_status(status_callback, f"{label} blew up: {e}")
            raise
        state = replace(state, t=t0 + n * cfg.dt)
        trajectory.final_state = state
        trajectory.steps = n
        if n % output_every == 0 or n == steps:
            emit(state)
        if n % report_every == 0:
            _report_status(status_callback, f"{label} t={state.t:.4g} ({n}/{steps})")
    return trajectory


def _report_status(callback: Optional[Callable[[str], None]], message: str):
    """Report a milestone to the callback and the log."""
    logger.info(message)
    if callback:
        callback(message)


def run_pe(
    initial: PeState,
    cfg: StepperConfig,
    t_final: float,
    output_every: int = 1,
    sink: Optional[RecordSink] = None,
    status_callback: Optional[Callable[[str], None]] = None,
) -> Trajectory:
    """
    Integrate the primitive equations from ``initial`` to ``initial.t + t_final``.

    Raises:
        ConfigurationError: t_final is not a multiple of dt
        BlowUpError: the solution became non-finite or the CFL step collapsed
    """
    return _run(
        pe_step, pe_record, "PE", initial, cfg, t_final, output_every, sink, status_callback
    )


def run_sns(
    initial: SnsState,
    cfg: StepperConfig,
    t_final: float,
    output_every: int = 1,
    sink: Optional[RecordSink] = None,
    status_callback: Optional[Callable[[str], None]] = None,
) -> Trajectory:
    """Integrate the scaled Navier-Stokes system; see ``run_pe``."""
    label = f"SNS eps={initial.eps:g}"
    return _run(
        sns_step, sns_record, label, initial, cfg, t_final, output_every, sink, status_callback
    )


def simulate(
    initial: State,
    cfg: StepperConfig,
    t_final: float,
    output_every: int = 1,
    sink: Optional[RecordSink] = None,
    status_callback: Optional[Callable[[str], None]] = None,
) -> Trajectory:
    """Run the PE or SNS solver depending on the type of ``initial``."""
    runner = run_sns if isinstance(initial, SnsState) else run_pe
    return runner(initial, cfg, t_final, output_every, sink, status_callback)
