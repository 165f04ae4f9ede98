"""Unit tests for the norm suite, energy audits, budgets and inequality ratios."""

import math

import numpy as np
import pytest


def _records(times, energy_sqrt, grad_sqrt):
    from src.diagnostics.norms import BudgetRecord, ScalarDiagnostic

    return [
        BudgetRecord(
            float(t),
            (
                ScalarDiagnostic("v_l2", float(a)),
                ScalarDiagnostic("grad_v_l2", float(b)),
                ScalarDiagnostic("w_l2", 0.0),
                ScalarDiagnostic("grad_w_l2", 0.0),
            ),
        )
        for t, a, b in zip(times, energy_sqrt, grad_sqrt)
    ]


def test_budget_record_access():
    """Test lookup, defaults and residual attachment."""
    from src.core.errors import InvalidStateError
    from src.diagnostics.norms import BudgetRecord, ScalarDiagnostic, Units

    diagnostics = (ScalarDiagnostic("v_l2", 2.0), ScalarDiagnostic("dt_v_l2", 1.0, Units.RATE))
    record = BudgetRecord(0.5, diagnostics)
    record = record.with_residuals(invariant_mean=0.0)
    assert record["v_l2"] == 2.0
    assert record["invariant_mean"] == 0.0
    assert record.get("missing") == 0.0
    assert record.row(("t", "v_l2")) == [0.5, 2.0]
    with pytest.raises(KeyError):
        record["missing"]
    with pytest.raises(InvalidStateError):
        BudgetRecord(0.0, (ScalarDiagnostic("v_l2", math.nan),))


def test_norm_suite_single_mode():
    """Test the norm suite on the single-mode data against closed forms."""
    from src.core.initial_data import InitialDataRecipe, make_initial_data
    from src.diagnostics.norms import norm_suite
    from src.spectral import Grid

    state = make_initial_data(InitialDataRecipe(), Grid.cube(16))
    record = norm_suite(state)
    k2 = 1.0 + math.pi**2
    assert record["v_l2"] ** 2 == pytest.approx(4.0 * math.pi**2)
    assert record["grad_v_l2"] ** 2 == pytest.approx(4.0 * math.pi**2 * k2)
    assert record["dz_v_l2"] ** 2 == pytest.approx(4.0 * math.pi**2 * math.pi**2)
    assert record["lap_v_l2"] ** 2 == pytest.approx(4.0 * math.pi**2 * k2**2)
    assert "dt_v_l2" not in record.names


def test_norm_suite_zero_and_parity_invariance():
    """Test that the zero state has zero norms and projection leaves norms unchanged."""
    from src.core.initial_data import InitialDataRecipe, RecipeId, make_initial_data
    from src.core.state import PeState, make_admissible
    from src.diagnostics.norms import norm_suite
    from src.spectral import Grid, Parity, SpectralField

    grid = Grid.cube(16)
    zero = norm_suite(PeState(SpectralField.zeros(grid, 2, Parity.EVEN)))
    assert all(zero[name] == 0.0 for name in zero.names)

    state = make_initial_data(InitialDataRecipe(RecipeId.RANDOM, seed=4), grid)
    before = norm_suite(state)
    after = norm_suite(PeState(make_admissible(state.v)))
    for name in before.names:
        assert after[name] == pytest.approx(before[name], rel=1e-12, abs=1e-14)


def test_norm_suite_sns_fields():
    """Test the eps-weighted w norms and the divergence of an SNS state."""
    from src.core.initial_data import InitialDataRecipe, RecipeId, make_initial_data
    from src.core.state import sns_initial_state
    from src.diagnostics.norms import norm_suite
    from src.spectral import Grid

    pe = make_initial_data(InitialDataRecipe(RecipeId.RANDOM, seed=2), Grid.cube(16))
    record = norm_suite(sns_initial_state(pe, 0.1))
    assert record["w_l2"] > 0.0
    assert record["eps_w_l2"] == pytest.approx(0.1 * record["w_l2"])
    assert record["divergence_l2"] < 1e-12


def test_zero_trajectory_audits():
    """Test that a zero trajectory has identically zero residuals and slack."""
    from src.diagnostics.energy import energy_audit_pe, energy_audit_sns

    records = _records([0.0, 0.1, 0.2], [0.0] * 3, [0.0] * 3)
    pe = energy_audit_pe(records, 1.0)
    assert np.all(pe.residual == 0.0)
    assert pe.relative_residual() == 0.0
    sns = energy_audit_sns(records, 0.1)
    assert np.all(sns.slack == 0.0)


def test_diffusion_only_audit():
    """Test the identity residual against the closed-form decay of one mode."""
    from src.diagnostics.energy import energy_audit_pe, energy_audit_sns

    times = np.linspace(0.0, 0.1, 10001)
    amplitude = np.exp(-times)
    records = _records(times, amplitude, amplitude)
    audit = energy_audit_pe(records, 1.0)
    assert np.max(np.abs(audit.residual)) <= 1e-10
    assert np.all(audit.slack >= -1e-15)
    assert np.max(np.abs(energy_audit_sns(records, 0.5).slack)) <= 1e-10


def test_audit_input_errors():
    """Test that short or unordered trajectories are refused."""
    from src.core.errors import InputError
    from src.diagnostics.energy import energy_audit_pe, energy_audit_sns

    with pytest.raises(InputError):
        energy_audit_pe(_records([0.0], [1.0], [1.0]), 1.0)
    with pytest.raises(InputError):
        energy_audit_pe(_records([0.0, 0.2, 0.1], [1.0] * 3, [1.0] * 3), 1.0)
    with pytest.raises(InputError):
        energy_audit_sns(_records([0.0, 0.1], [1.0] * 2, [1.0] * 2), 0.0)


def test_budget_monitor_heat_equation():
    """Test that the running H1 budget never increases without advection."""
    from src.core.initial_data import InitialDataRecipe, RecipeId, make_initial_data
    from src.diagnostics.budgets import BudgetMonitor
    from src.solvers.driver import run_pe
    from src.solvers.stepping import StepperConfig
    from src.spectral import Grid

    state = make_initial_data(InitialDataRecipe(RecipeId.RANDOM, seed=3), Grid.cube(16))
    trajectory = run_pe(state, StepperConfig(dt=5e-4, nonlinear=False), 0.02)
    monitor = BudgetMonitor()
    for record in trajectory.records:
        values = monitor.update(record)
    assert "cor36_h1_running" in values
    assert np.all(np.diff(monitor.running_h1) <= 0.0)
    assert max(monitor.growth().values()) < monitor.growth_limit
    assert monitor.unbounded() == []


def test_ladyzhenskaya_constants():
    """Test the ratio on f = g = h = 1 and on f = 0."""
    from src.diagnostics.inequalities import ladyzhenskaya_ratio
    from src.spectral import Grid, SpectralField

    grid = Grid.cube(16)
    one = SpectralField.zeros(grid)
    one.coefficients[0, 0, 0] = 1.0
    expected = 1.0 / (math.sqrt(2) * math.pi)
    assert ladyzhenskaya_ratio(one, one, one, "a") == pytest.approx(expected)
    assert ladyzhenskaya_ratio(one, one, one, "b") == pytest.approx(expected)
    assert ladyzhenskaya_ratio(SpectralField.zeros(grid), one, one) == 0.0


def test_inequality_input_errors():
    """Test that vector fields and unknown variants are refused."""
    from src.core.errors import InputError
    from src.diagnostics.inequalities import ladyzhenskaya_ratio
    from src.spectral import Grid, SpectralField

    grid = Grid.cube(16)
    scalar = SpectralField.zeros(grid)
    with pytest.raises(InputError):
        ladyzhenskaya_ratio(SpectralField.zeros(grid, 2), scalar, scalar)
    with pytest.raises(InputError):
        ladyzhenskaya_ratio(scalar, scalar, scalar, "c")


def test_lemma22_zero_velocity():
    """Test that a zero advecting velocity gives a zero ratio."""
    from src.diagnostics.inequalities import lemma22_ratio
    from src.spectral import Grid, Parity, SpectralField, random_band_limited

    grid = Grid.cube(16)
    v = SpectralField.zeros(grid, 2, Parity.EVEN)
    phi = random_band_limited(grid, seed=1)
    psi = random_band_limited(grid, seed=2)
    assert lemma22_ratio(v, phi, psi) == 0.0


def test_ratio_family():
    """Test a small seeded ratio family."""
    from src.diagnostics.inequalities import InequalityId, ratio_family
    from src.spectral import Grid

    grid = Grid.cube(16)
    report = ratio_family(InequalityId.LEMMA22, grid, count=4, seed=10)
    assert report.count == 4
    assert report.max_ratio == max(report.ratios)
    assert report.max_ratio > 0.0
    again = ratio_family("Lemma2.2", grid, count=4, seed=10)
    assert again.ratios == report.ratios


def test_ratio_refinement_stability():
    """Test that doubling the resolution barely moves the family maximum."""
    from src.diagnostics.inequalities import InequalityId, refinement_change
    from src.spectral import Grid

    assert refinement_change(InequalityId.LEMMA21_A, Grid.cube(16), count=10) < 0.05


@pytest.mark.parametrize("variant", ["a", "b"])
def test_ladyzhenskaya_scale_invariance(variant):
    """Test that scaling any one of f, g, h leaves the ratio unchanged."""
    from src.diagnostics.inequalities import ladyzhenskaya_ratio
    from src.spectral import Grid, random_band_limited

    grid = Grid.cube(16)
    f, g, h = (random_band_limited(grid, seed=s) for s in (21, 22, 23))
    base = ladyzhenskaya_ratio(f, g, h, variant)
    assert base > 0.0
    for scaled in (
        ladyzhenskaya_ratio(f * 3.7, g, h, variant),
        ladyzhenskaya_ratio(f, g * 0.25, h, variant),
        ladyzhenskaya_ratio(f, g, h * 12.0, variant),
    ):
        assert abs(scaled - base) <= 1e-12 * base
