"""Harness module - PE/SNS pair runs, eps sweeps and convergence-rate fits."""

from src.harness.fit import FLOOR_FACTOR, RateFit, fit_log_log, fit_rate
from src.harness.pair import difference_norms, estimate_error_floor, resolve_initial, run_pair
from src.harness.report import SERIES, DiffReport, NormId, TheoremId, norm_value, theorem_norms
from src.harness.sweep import (
    MONOTONE_NORMS,
    EpsilonSweep,
    SweepResult,
    is_monotone,
    run_convergence,
)

__all__ = [
    'DiffReport',
    'EpsilonSweep',
    'FLOOR_FACTOR',
    'MONOTONE_NORMS',
    'NormId',
    'RateFit',
    'SERIES',
    'SweepResult',
    'TheoremId',
    'difference_norms',
    'estimate_error_floor',
    'fit_log_log',
    'fit_rate',
    'is_monotone',
    'norm_value',
    'resolve_initial',
    'run_convergence',
    'run_pair',
    'theorem_norms',
]
