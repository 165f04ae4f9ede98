"""Diagnostics module - norm suite, energy audits, budgets and inequality ratios."""

from src.diagnostics.budgets import BUDGETS, GROWTH_LIMIT, Budget, BudgetMonitor
from src.diagnostics.energy import EnergyAudit, energy_audit_pe, energy_audit_sns
from src.diagnostics.inequalities import (
    InequalityId,
    RatioReport,
    ladyzhenskaya_ratio,
    lemma22_ratio,
    ratio_family,
    refinement_change,
)
from src.diagnostics.norms import (
    BudgetRecord,
    ScalarDiagnostic,
    Units,
    magnitude_gradient_norm,
    norm_suite,
)

__all__ = [
    'BUDGETS',
    'Budget',
    'BudgetMonitor',
    'BudgetRecord',
    'EnergyAudit',
    'GROWTH_LIMIT',
    'InequalityId',
    'RatioReport',
    'ScalarDiagnostic',
    'Units',
    'energy_audit_pe',
    'energy_audit_sns',
    'ladyzhenskaya_ratio',
    'lemma22_ratio',
    'magnitude_gradient_norm',
    'norm_suite',
    'ratio_family',
    'refinement_change',
]
