"""Least-squares convergence orders from (eps, error) pairs."""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from src.core.errors import DegenerateFitError, InputError
from src.harness.report import DiffReport, NormId, norm_value

logger = logging.getLogger(__name__)

# Points whose error is within this factor of the discretization floor are dropped.
FLOOR_FACTOR = 10.0
MIN_POINTS = 3


@dataclass(frozen=True)
class RateFit:
    """log(error) = slope * log(eps) + intercept over the retained points."""

    norm_id: str
    eps: Tuple[float, ...]
    errors: Tuple[float, ...]
    slope: float
    intercept: float
    residual: float
    excluded: Tuple[float, ...] = ()


def fit_log_log(
    eps: Sequence[float],
    errors: Sequence[float],
    norm_id: Union[NormId, str] = NormId.THM11_SUP_L2,
) -> RateFit:
    """
    Fit the slope of log(error) against log(eps).

    The residual is the root mean square misfit of log(error).

    Raises:
        InputError: fewer than 3 points, or eps not strictly decreasing
        DegenerateFitError: an error value is zero or negative
    """
    eps = tuple(float(e) for e in eps)
    errors = tuple(float(e) for e in errors)
    if len(eps) != len(errors):
        raise InputError("eps and error lists differ in length")
    if len(eps) < MIN_POINTS:
        raise InputError(f"need at least {MIN_POINTS} points, got {len(eps)}")
    if any(b >= a for a, b in zip(eps, eps[1:])) or eps[-1] <= 0.0:
        raise InputError("eps values must be positive and strictly decreasing")
    if any(not (e > 0.0 and math.isfinite(e)) for e in errors):
        raise DegenerateFitError("error values must be positive and finite to take logs")

    x = np.log(np.asarray(eps))
    y = np.log(np.asarray(errors))
    slope, intercept = np.polyfit(x, y, 1)
    misfit = y - (slope * x + intercept)
    residual = float(np.sqrt(np.mean(misfit**2)))
    return RateFit(NormId(norm_id).value, eps, errors, float(slope), float(intercept), residual)


def fit_rate(
    reports: Sequence[DiffReport],
    norm_id: Union[NormId, str],
    floor: Optional[float] = None,
    floor_factor: float = FLOOR_FACTOR,
) -> RateFit:
    """
    Convergence order of one norm across an eps sweep.

    With ``floor`` given, reports whose error is below ``floor_factor * floor``
    are excluded before fitting; the excluded eps values are kept on the result.

    Raises:
        InputError: fewer than 3 reports or a failed report
        DegenerateFitError: too few points survive the exclusion, or an error is zero
    """
    norm_id = NormId(norm_id)
    if len(reports) < MIN_POINTS:
        raise InputError(f"need at least {MIN_POINTS} reports, got {len(reports)}")
    failed = [r.eps for r in reports if r.failed]
    if failed:
        raise InputError(f"cannot fit over failed runs (eps = {failed})")

    ordered = sorted(reports, key=lambda r: r.eps, reverse=True)
    kept, excluded = [], []
    for report in ordered:
        error = norm_value(report, norm_id)
        if floor is not None and error < floor_factor * floor:
            excluded.append(report.eps)
            logger.info(
                "%s: eps=%g excluded (error %.3e within %gx of floor %.3e)",
                norm_id.value,
                report.eps,
                error,
                floor_factor,
                floor,
            )
        else:
            kept.append((report.eps, error))
    if len(kept) < MIN_POINTS:
        raise DegenerateFitError(
            f"{norm_id.value}: only {len(kept)} points above the error floor"
        )
    fit = fit_log_log([e for e, _ in kept], [err for _, err in kept], norm_id)
    return RateFit(
        fit.norm_id, fit.eps, fit.errors, fit.slope, fit.intercept, fit.residual, tuple(excluded)
    )
