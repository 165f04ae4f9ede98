"""Solvers module - PE, scaled NS and isotropic reference time steppers."""

from src.solvers.driver import Trajectory, pe_record, run_pe, run_sns, simulate, sns_record
from src.solvers.isotropic import isotropic_rhs, isotropic_step, leray_project
from src.solvers.pe import PePressure, pe_pressure_solve, pe_rhs, pe_step, pe_time_derivative
from src.solvers.sns import (
    SnsPressure,
    anisotropic_operator,
    sns_pressure_solve,
    sns_rhs,
    sns_step,
    sns_time_derivative,
)
from src.solvers.stepping import (
    MIN_DT,
    PeStepperConfig,
    Scheme,
    SnsStepperConfig,
    StepperConfig,
    step_count,
)

__all__ = [
    'MIN_DT',
    'PePressure',
    'PeStepperConfig',
    'Scheme',
    'SnsPressure',
    'SnsStepperConfig',
    'StepperConfig',
    'Trajectory',
    'anisotropic_operator',
    'isotropic_rhs',
    'isotropic_step',
    'leray_project',
    'pe_pressure_solve',
    'pe_record',
    'pe_rhs',
    'pe_step',
    'pe_time_derivative',
    'run_pe',
    'run_sns',
    'simulate',
    'sns_pressure_solve',
    'sns_record',
    'sns_rhs',
    'sns_step',
    'sns_time_derivative',
    'step_count',
]
