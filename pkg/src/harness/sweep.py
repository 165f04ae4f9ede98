"""
EpsilonSweep - threaded eps-sweep pipeline.

Stage A (caller thread):
    - Builds the shared initial PE state once
    - Queues one job per eps value

Stage B (worker threads):
    - Pull eps values from the job queue
    - Run the lockstep PE / SNS pair for each

Stage C (collector):
    - Merges reports by eps (descending), independent of completion order
    - Runs the error-floor estimate and fits every convergence norm
"""

import logging
import queue
import threading
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from src.core.errors import ConfigurationError, DegenerateFitError, InputError
from src.core.state import PeState
from src.harness.fit import FLOOR_FACTOR, RateFit, fit_rate
from src.harness.pair import InitialData, estimate_error_floor, resolve_initial, run_pair
from src.harness.report import DiffReport, NormId, norm_value
from src.spectral import Grid

logger = logging.getLogger(__name__)

# Relative slack allowed when checking that errors shrink with eps.
MONOTONE_TOLERANCE = 0.05

# Norms whose decrease with eps is checked after every sweep.
MONOTONE_NORMS = (NormId.THM11_SUP_L2, NormId.THM12_SUP_W_L2)


@dataclass
class SweepResult:
    """Reports ordered by decreasing eps, plus fits and exclusions per norm."""

    reports: Tuple[DiffReport, ...]
    floor: Optional[DiffReport] = None
    fits: Dict[str, RateFit] = field(default_factory=dict)
    fit_errors: Dict[str, str] = field(default_factory=dict)

    @property
    def failed(self) -> List[float]:
        return [r.eps for r in self.reports if r.failed]

    @property
    def exclusions(self) -> Dict[str, List[float]]:
        return {name: list(fit.excluded) for name, fit in self.fits.items() if fit.excluded}

    @property
    def monotone(self) -> Dict[str, bool]:
        """Monotonicity in eps of each checked norm, over the runs that finished."""
        finished = [r for r in self.reports if not r.failed]
        return {n.value: is_monotone(finished, n) for n in MONOTONE_NORMS}


class EpsilonSweep:
    """
    Parallel map of ``run_pair`` over eps values.

    Each pair run is sequential and deterministic, and every job reads the same
    immutable initial state, so the merged result does not depend on the number
    of workers or the order in which jobs finish.
    """

    def __init__(
        self,
        initial: InitialData,
        grid: Grid,
        t_final: float,
        dt: float,
        eps_values: Sequence[float],
        output_every: int = 1,
        cfl_safety: float = 0.5,
        workers: int = 1,
        status_callback: Optional[Callable[[str], None]] = None,
    ):
        """
        Args:
            initial: recipe or ready-made PE state shared by every eps
            grid: common collocation grid
            t_final: horizon of every run
            dt: outer time step of both solvers
            eps_values: aspect ratios to sweep
            output_every: output cadence in steps
            cfl_safety: CFL safety factor of both solvers
            workers: number of worker threads
            status_callback: Optional callback for status messages
        """
        if workers < 1:
            raise ConfigurationError("workers must be at least 1")
        if len(set(eps_values)) != len(eps_values):
            raise ConfigurationError("eps values must be distinct")
        self._initial: PeState = resolve_initial(initial, grid)
        self._grid = grid
        self._t_final = t_final
        self._dt = dt
        self._eps_values = tuple(float(e) for e in eps_values)
        self._output_every = output_every
        self._cfl_safety = cfl_safety
        self._workers = workers
        self._status_callback = status_callback

        self._jobs: queue.Queue = queue.Queue()
        self._results: Dict[float, DiffReport] = {}
        self._errors: Dict[float, BaseException] = {}
        self._lock = threading.Lock()
        self._threads: List[threading.Thread] = []

    @property
    def initial_state(self) -> PeState:
        return self._initial

    def run(self) -> Tuple[DiffReport, ...]:
        """Run every eps job and return the reports ordered by decreasing eps."""
        for eps in self._eps_values:
            self._jobs.put(eps)

        self._threads = [
            threading.Thread(target=self._worker_loop, name=f"Sweep_Worker_{i}", daemon=True)
            for i in range(min(self._workers, len(self._eps_values)))
        ]
        for thread in self._threads:
            thread.start()
        self._report_status(
            f"Sweep started: {len(self._eps_values)} eps values on {len(self._threads)} workers"
        )
        for thread in self._threads:
            thread.join()

        if self._errors:
            eps, error = sorted(self._errors.items(), reverse=True)[0]
            self._report_status(f"Sweep aborted at eps={eps:g}: {error}")
            raise error
        self._report_status("Sweep finished")
        return tuple(self._results[eps] for eps in sorted(self._results, reverse=True))

    def _worker_loop(self):
        while True:
            try:
                eps = self._jobs.get_nowait()
            except queue.Empty:
                return
            try:
                report = run_pair(
                    self._initial,
                    eps,
                    self._grid,
                    self._t_final,
                    self._dt,
                    output_every=self._output_every,
                    cfl_safety=self._cfl_safety,
                    status_callback=self._status_callback,
                )
            except Exception as e:
                with self._lock:
                    self._errors[eps] = e
            else:
                with self._lock:
                    self._results[eps] = report
            finally:
                self._jobs.task_done()

    def _report_status(self, message: str):
        """Report status message."""
        logger.info(message)
        if self._status_callback:
            self._status_callback(message)


def is_monotone(
    reports: Sequence[DiffReport],
    norm_id: NormId = NormId.THM11_SUP_L2,
    tolerance: float = MONOTONE_TOLERANCE,
) -> bool:
    """True when the error does not grow, beyond ``tolerance``, as eps decreases."""
    ordered = sorted(reports, key=lambda r: r.eps, reverse=True)
    values = [norm_value(r, norm_id) for r in ordered]
    return all(b <= (1.0 + tolerance) * a for a, b in zip(values, values[1:]))


def run_convergence(
    initial: InitialData,
    grid: Grid,
    t_final: float,
    dt: float,
    eps_values: Sequence[float],
    output_every: int = 1,
    cfl_safety: float = 0.5,
    workers: int = 1,
    norms: Sequence[NormId] = tuple(NormId),
    floor_factor: float = FLOOR_FACTOR,
    status_callback: Optional[Callable[[str], None]] = None,
) -> SweepResult:
    """
    Sweep, error floor and fits in one call.

    A norm whose fit cannot be formed (too few points above the floor, zero
    errors, failed runs) is recorded in ``fit_errors`` instead of raising.
    """
    sweep = EpsilonSweep(
        initial,
        grid,
        t_final,
        dt,
        eps_values,
        output_every=output_every,
        cfl_safety=cfl_safety,
        workers=workers,
        status_callback=status_callback,
    )
    reports = sweep.run()
    floor = estimate_error_floor(
        sweep.initial_state, grid, t_final, dt, output_every, cfl_safety, status_callback
    )
    result = SweepResult(reports=reports, floor=floor)
    for norm_id in norms:
        norm_id = NormId(norm_id)
        floor_value = None if floor.failed else norm_value(floor, norm_id)
        try:
            result.fits[norm_id.value] = fit_rate(reports, norm_id, floor_value, floor_factor)
        except (DegenerateFitError, InputError) as e:
            result.fit_errors[norm_id.value] = str(e)
            logger.warning("%s: no fit (%s)", norm_id.value, e)
    return result
