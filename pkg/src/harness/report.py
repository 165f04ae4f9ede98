"""
Difference reports between a PE run and an SNS run, and the theorem-style summaries.

With V = v_eps - v and W = w_eps - w the series recorded at each output time are

    V_l2, eps_W_l2, grad_V_l2, eps_grad_W_l2, W_l2, V_h1, lap_V_l2, eps_lap_W_l2,
    grad_lap_V_l2, eps_grad_lap_W_l2
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Union

import numpy as np

from src.core.errors import InputError

SERIES = (
    "V_l2",
    "eps_W_l2",
    "grad_V_l2",
    "eps_grad_W_l2",
    "W_l2",
    "V_h1",
    "lap_V_l2",
    "eps_lap_W_l2",
    "grad_lap_V_l2",
    "eps_grad_lap_W_l2",
)


class TheoremId(str, Enum):
    THM11 = "thm1.1"
    THM12 = "thm1.2"
    HIGHER = "higher"


class NormId(str, Enum):
    """Scalar summaries the convergence rates are fitted on."""

    THM11_SUP_L2 = "thm1.1-sup-l2"
    THM11_TOTAL = "thm1.1-total"
    THM11_W_INTEGRAL = "thm1.1-int-w-l2"
    THM12_SUP_H1 = "thm1.2-sup-h1"
    THM12_TOTAL = "thm1.2-total"
    THM12_SUP_W_L2 = "thm1.2-sup-w-l2"


@dataclass
class DiffReport:
    """Difference norm series of one eps; ``failed`` marks a partial run."""

    eps: float
    times: List[float] = field(default_factory=list)
    series: Dict[str, List[float]] = field(default_factory=lambda: {k: [] for k in SERIES})
    failed: bool = False
    last_valid_time: Optional[float] = None
    message: str = ""
    # E(0) - E(t) - 2 int D of the SNS run; non-negative up to time-stepping error.
    energy_slack: List[float] = field(default_factory=list)

    def append(self, t: float, values: Dict[str, float]):
        for name in SERIES:
            value = values[name]
            if not (value >= 0.0 and math.isfinite(value)):
                raise InputError(f"difference norm {name} must be finite and non-negative")
            self.series[name].append(value)
        self.times.append(t)
        self.last_valid_time = t

    def array(self, name: str) -> np.ndarray:
        return np.asarray(self.series[name], dtype=float)

    def __len__(self) -> int:
        return len(self.times)


def _sup(values: np.ndarray) -> float:
    return float(np.max(values)) if values.size else 0.0


def _integral(values: np.ndarray, times: np.ndarray) -> float:
    if values.size < 2:
        return 0.0
    return float(np.trapezoid(values, times))


def theorem_norms(report: DiffReport, which: Union[TheoremId, str]) -> Dict[str, float]:
    """
    Sup-in-time and time-integral quantities grouped as in the convergence theorems.

    thm1.1:  sup ||(V, eps W)||^2, int ||grad (V, eps W)||^2, int ||W||^2
    thm1.2:  sup ||(V, eps W)||_{H1}^2, int ||grad (V, eps W)||_{H1}^2, sup ||W||^2
    higher:  sup ||(V, eps W)||_{H2}^2, int ||grad (V, eps W)||_{H2}^2

    ``total`` adds the sup part and the gradient integral of the chosen grouping.
    """
    which = TheoremId(which)
    t = np.asarray(report.times, dtype=float)

    def sq(*names: str) -> np.ndarray:
        return sum(report.array(n) ** 2 for n in names) if len(report) else np.zeros(0)

    l2 = sq("V_l2", "eps_W_l2")
    h1 = sq("grad_V_l2", "eps_grad_W_l2")
    h2 = sq("lap_V_l2", "eps_lap_W_l2")
    h3 = sq("grad_lap_V_l2", "eps_grad_lap_W_l2")

    if which is TheoremId.THM11:
        out = {
            "sup_l2": _sup(l2),
            "int_grad_l2": _integral(h1, t),
            "int_w_l2": _integral(sq("W_l2"), t),
        }
        out["total"] = out["sup_l2"] + out["int_grad_l2"]
    elif which is TheoremId.THM12:
        out = {
            "sup_h1": _sup(l2 + h1),
            "int_grad_h1": _integral(h1 + h2, t),
            "sup_w_l2": _sup(sq("W_l2")),
        }
        out["total"] = out["sup_h1"] + out["int_grad_h1"]
    else:
        out = {
            "sup_h2": _sup(l2 + h1 + h2),
            "int_grad_h2": _integral(h1 + h2 + h3, t),
        }
        out["total"] = out["sup_h2"] + out["int_grad_h2"]
    return out


def norm_value(report: DiffReport, norm_id: Union[NormId, str]) -> float:
    """
    Error value fitted against eps. Squared summaries are reported as their square
    root so that an O(eps) bound gives slope 1.
    """
    norm_id = NormId(norm_id)
    if norm_id is NormId.THM11_SUP_L2:
        value = theorem_norms(report, TheoremId.THM11)["sup_l2"]
    elif norm_id is NormId.THM11_TOTAL:
        value = theorem_norms(report, TheoremId.THM11)["total"]
    elif norm_id is NormId.THM11_W_INTEGRAL:
        value = theorem_norms(report, TheoremId.THM11)["int_w_l2"]
    elif norm_id is NormId.THM12_SUP_H1:
        value = theorem_norms(report, TheoremId.THM12)["sup_h1"]
    elif norm_id is NormId.THM12_TOTAL:
        value = theorem_norms(report, TheoremId.THM12)["total"]
    else:
        value = theorem_norms(report, TheoremId.THM12)["sup_w_l2"]
    return math.sqrt(value)
