"""Unit tests for pair runs, difference reports, rate fits and the eps sweep."""

import math

import numpy as np
import pytest


def _report(eps, value, times=(0.0, 0.5, 1.0)):
    """Report whose V_l2 is ``value`` at every sample and every other series is 0."""
    from src.harness.report import SERIES, DiffReport

    report = DiffReport(eps=eps)
    for t in times:
        report.append(t, {name: (value if name == "V_l2" else 0.0) for name in SERIES})
    return report


def test_fit_exact_orders():
    """Test slopes of exactly linear and quadratic data."""
    from src.harness.fit import fit_log_log

    linear = fit_log_log([0.2, 0.1, 0.05], [0.2, 0.1, 0.05])
    assert linear.slope == pytest.approx(1.0, abs=1e-12)
    assert linear.residual == pytest.approx(0.0, abs=1e-12)

    quadratic = fit_log_log([0.2, 0.1, 0.05], [0.04, 0.01, 0.0025])
    assert quadratic.slope == pytest.approx(2.0, abs=1e-12)


def test_fit_input_errors():
    """Test the fit preconditions."""
    from src.core.errors import DegenerateFitError, InputError
    from src.harness.fit import fit_log_log

    with pytest.raises(InputError):
        fit_log_log([0.2, 0.1], [0.2, 0.1])
    with pytest.raises(InputError):
        fit_log_log([0.1, 0.2, 0.05], [0.1, 0.2, 0.05])
    with pytest.raises(DegenerateFitError):
        fit_log_log([0.2, 0.1, 0.05], [0.2, 0.0, 0.05])


def test_fit_rate_excludes_floor_points():
    """Test that points near the error floor are dropped and recorded."""
    from src.core.errors import DegenerateFitError
    from src.harness.fit import fit_rate
    from src.harness.report import NormId

    reports = [_report(e, e) for e in (0.4, 0.2, 0.1, 0.05)]
    fit = fit_rate(reports, NormId.THM11_SUP_L2, floor=0.006)
    assert fit.excluded == (0.05,)
    assert fit.eps == (0.4, 0.2, 0.1)
    assert fit.slope == pytest.approx(1.0)

    with pytest.raises(DegenerateFitError):
        fit_rate(reports, NormId.THM11_SUP_L2, floor=0.015)


def test_fit_rate_rejects_failed_runs():
    """Test that failed reports cannot be fitted."""
    from src.core.errors import InputError
    from src.harness.fit import fit_rate

    reports = [_report(e, e) for e in (0.2, 0.1, 0.05)]
    reports[1].failed = True
    with pytest.raises(InputError):
        fit_rate(reports, "thm1.1-sup-l2")


def test_theorem_norms():
    """Test sup and trapezoid summaries of synthetic reports."""
    from src.harness.report import NormId, TheoremId, norm_value, theorem_norms

    report = _report(0.1, 2.0)
    thm11 = theorem_norms(report, TheoremId.THM11)
    assert thm11["sup_l2"] == pytest.approx(4.0)
    assert thm11["int_grad_l2"] == 0.0
    assert thm11["total"] == pytest.approx(4.0)
    assert norm_value(report, NormId.THM11_SUP_L2) == pytest.approx(2.0)

    zero = _report(0.1, 0.0)
    assert all(v == 0.0 for v in theorem_norms(zero, "thm1.2").values())

    single = _report(0.1, 3.0, times=(0.0,))
    higher = theorem_norms(single, TheoremId.HIGHER)
    assert higher["int_grad_h2"] == 0.0
    assert higher["sup_h2"] == pytest.approx(9.0)


def test_report_rejects_negative_norms():
    """Test that difference norms must be finite and non-negative."""
    from src.core.errors import InputError
    from src.harness.report import SERIES, DiffReport

    report = DiffReport(eps=0.1)
    with pytest.raises(InputError):
        report.append(0.0, {name: -1.0 for name in SERIES})
    with pytest.raises(InputError):
        report.append(0.0, {name: math.inf for name in SERIES})


def test_is_monotone():
    """Test the monotonicity check with its tolerance."""
    from src.harness.sweep import is_monotone

    assert is_monotone([_report(0.2, 1.0), _report(0.1, 0.5), _report(0.05, 0.51)])
    assert not is_monotone([_report(0.2, 1.0), _report(0.1, 0.5), _report(0.05, 0.6)])


def test_pair_run_starts_at_zero_difference():
    """Test that shared initial data give V = W = 0 at t = 0."""
    from src.core.initial_data import InitialDataRecipe
    from src.harness.pair import run_pair
    from src.harness.report import SERIES
    from src.spectral import Grid

    report = run_pair(InitialDataRecipe(), 0.1, Grid.cube(16), 0.005, 1e-3)
    assert not report.failed
    assert len(report) == 6
    assert report.times[-1] == pytest.approx(0.005)
    assert all(report.series[name][0] == 0.0 for name in SERIES)
    assert report.energy_slack[0] == 0.0
    energy0 = 4.0 * math.pi**2
    assert min(report.energy_slack) >= -1e-4 * energy0
    assert max(report.series["V_l2"]) < math.sqrt(energy0)


def test_pair_run_from_zero_state():
    """Test that the zero steady state gives identically zero differences."""
    from src.core.state import PeState
    from src.harness.pair import run_pair
    from src.spectral import Grid, Parity, SpectralField

    grid = Grid.cube(16)
    zero = PeState(SpectralField.zeros(grid, 2, Parity.EVEN))
    report = run_pair(zero, 0.1, grid, 0.003, 1e-3)
    assert all(max(values) == 0.0 for values in report.series.values())


def test_error_floor():
    """Test that the dt / dt/2 floor is small and tagged with eps = 0."""
    from src.core.initial_data import InitialDataRecipe
    from src.harness.pair import estimate_error_floor
    from src.harness.report import NormId, norm_value
    from src.spectral import Grid

    floor = estimate_error_floor(InitialDataRecipe(), Grid.cube(16), 0.004, 1e-3)
    assert floor.eps == 0.0
    assert len(floor) == 5
    assert norm_value(floor, NormId.THM11_SUP_L2) < 1e-4


def test_sweep_is_independent_of_worker_count():
    """Test that threaded sweeps give the same reports as a sequential one."""
    from src.core.initial_data import InitialDataRecipe, RecipeId
    from src.harness.sweep import EpsilonSweep
    from src.spectral import Grid

    grid = Grid.cube(16)
    recipe = InitialDataRecipe(RecipeId.RANDOM, seed=42)
    eps = (0.5, 0.2, 0.1)
    messages = []
    serial = EpsilonSweep(recipe, grid, 0.002, 1e-3, eps, workers=1).run()
    threaded = EpsilonSweep(
        recipe, grid, 0.002, 1e-3, eps, workers=3, status_callback=messages.append
    ).run()
    assert [r.eps for r in threaded] == list(eps)
    for a, b in zip(serial, threaded):
        assert a.series == b.series
    assert any("Sweep finished" in m for m in messages)


def test_sweep_rejects_duplicate_eps():
    """Test that repeated eps values are refused."""
    from src.core.errors import ConfigurationError
    from src.core.initial_data import InitialDataRecipe
    from src.harness.sweep import EpsilonSweep
    from src.spectral import Grid

    with pytest.raises(ConfigurationError):
        EpsilonSweep(InitialDataRecipe(), Grid.cube(16), 0.002, 1e-3, (0.1, 0.1, 0.05))


def test_run_convergence_accounts_for_every_norm():
    """Test that every norm ends up either fitted or with a recorded reason."""
    from src.core.initial_data import InitialDataRecipe
    from src.harness.report import NormId
    from src.harness.sweep import run_convergence
    from src.spectral import Grid

    result = run_convergence(InitialDataRecipe(), Grid.cube(16), 0.002, 1e-3, (0.2, 0.1, 0.05))
    assert set(result.fits) | set(result.fit_errors) == {n.value for n in NormId}
    assert not set(result.fits) & set(result.fit_errors)
    assert result.floor is not None and result.floor.eps == 0.0
    assert [r.eps for r in result.reports] == [0.2, 0.1, 0.05]
    assert np.isfinite([f.slope for f in result.fits.values()]).all()


def test_sweep_result_monotone_checks_w_and_skips_failed_runs():
    """Test the per-norm monotonicity map of a sweep result."""
    from src.harness.report import SERIES, DiffReport
    from src.harness.sweep import SweepResult

    reports = []
    for eps, v, w in ((0.2, 0.2, 1.0), (0.1, 0.1, 2.0), (0.05, 0.05, 4.0), (0.025, 9.0, 0.0)):
        report = DiffReport(eps=eps)
        values = {name: 0.0 for name in SERIES}
        values.update(V_l2=v, W_l2=w)
        report.append(0.0, values)
        reports.append(report)
    reports[-1].failed = True

    monotone = SweepResult(reports=tuple(reports)).monotone
    assert monotone == {"thm1.1-sup-l2": True, "thm1.2-sup-w-l2": False}
