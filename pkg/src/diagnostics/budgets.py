"""
Running a priori budgets for the primitive equations.

Each budget is sup_{s<=t} A(s) + c int_0^t B(s) ds for the quantities A, B of one
of the uniform-in-time estimates. Nothing here asserts the analytic right-hand
sides (their constants are not explicit); the monitor only tracks growth
relative to the initial value.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

from src.diagnostics.norms import BudgetRecord

logger = logging.getLogger(__name__)

# A budget exceeding this multiple of its initial value is reported as unbounded.
GROWTH_LIMIT = 1e3

Quantity = Callable[[BudgetRecord], float]


def _sq(*names: str) -> Quantity:
    return lambda r: sum(r.get(name) ** 2 for name in names)


@dataclass(frozen=True)
class Budget:
    name: str
    sup_term: Quantity
    rate_term: Quantity
    weight: float = 1.0


BUDGETS = (
    Budget("basic_energy", _sq("v_l2"), _sq("grad_v_l2"), 2.0),
    Budget("l4_budget", lambda r: r.get("v_l4") ** 4, _sq("v_grad_v_l2"), 2.0),
    Budget("dz_budget", _sq("dz_v_l2"), _sq("grad_dz_v_l2")),
    Budget("first_order", _sq("grad_v_l2"), _sq("lap_v_l2", "dt_v_l2"), 0.5),
    Budget("second_order", _sq("lap_v_l2"), _sq("grad_lap_v_l2", "grad_dt_v_l2"), 0.5),
    Budget("cor36_h1", _sq("v_l2", "grad_v_l2"), _sq("grad_v_l2", "lap_v_l2", "dt_v_l2")),
    Budget(
        "cor36_h2",
        _sq("v_l2", "grad_v_l2", "lap_v_l2"),
        _sq("grad_v_l2", "lap_v_l2", "grad_lap_v_l2", "dt_v_l2", "grad_dt_v_l2"),
    ),
)


class BudgetMonitor:
    """
    Accumulates the budgets over consecutive output records.

    Integrals use the trapezoidal rule between successive records. Besides the
    sup-based budgets the monitor keeps ``cor36_h1_running``, the value
    ||v(t)||_{H1}^2 + int_0^t (||grad v||_{H1}^2 + ||dt v||^2), which never
    increases for the heat equation.
    """

    def __init__(self, budgets=BUDGETS, growth_limit: float = GROWTH_LIMIT):
        self._budgets = tuple(budgets)
        self.growth_limit = growth_limit
        self._last: Optional[BudgetRecord] = None
        self._sup: Dict[str, float] = {}
        self._integral: Dict[str, float] = {}
        self._initial: Dict[str, float] = {}
        self._running_h1: List[float] = []

    def update(self, record: BudgetRecord) -> Dict[str, float]:
        """Feed the next record; returns the current budget values."""
        for budget in self._budgets:
            value = budget.sup_term(record)
            if self._last is None:
                self._sup[budget.name] = value
                self._integral[budget.name] = 0.0
            else:
                h = record.t - self._last.t
                step = 0.5 * h * (budget.rate_term(self._last) + budget.rate_term(record))
                self._sup[budget.name] = max(self._sup[budget.name], value)
                self._integral[budget.name] += budget.weight * step
        self._last = record
        current = self.values
        if not self._initial:
            self._initial = dict(current)
        h1 = next(b for b in self._budgets if b.name == "cor36_h1")
        self._running_h1.append(h1.sup_term(record) + self._integral["cor36_h1"])
        current["cor36_h1_running"] = self._running_h1[-1]
        return current

    @property
    def values(self) -> Dict[str, float]:
        return {name: self._sup[name] + self._integral[name] for name in self._sup}

    @property
    def running_h1(self) -> List[float]:
        return list(self._running_h1)

    def growth(self) -> Dict[str, float]:
        """Budget divided by its initial value (1.0 when the initial value is 0)."""
        out = {}
        for name, value in self.values.items():
            initial = self._initial.get(name, 0.0)
            out[name] = value / initial if initial > 0.0 else 1.0
        return out

    def unbounded(self) -> List[str]:
        """Names of budgets whose growth exceeds the limit."""
        names = [name for name, g in self.growth().items() if g > self.growth_limit]
        for name in names:
            logger.warning(
                "budget %s grew beyond %.0e of its initial value", name, self.growth_limit
            )
        return names
