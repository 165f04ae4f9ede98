"""Unit tests for the scaled Navier-Stokes solver and the isotropic reference solver."""

import math

import numpy as np
import pytest


def _sns(eps, recipe="single-mode", seed=42):
    from src.core.initial_data import InitialDataRecipe, make_initial_data
    from src.core.state import sns_initial_state
    from src.spectral import Grid

    pe = make_initial_data(InitialDataRecipe(recipe, seed=seed), Grid.cube(16))
    return sns_initial_state(pe, eps)


def test_zero_state():
    """Test that the zero state has zero pressure, zero tendencies and stays zero."""
    from src.core.state import SnsState
    from src.solvers.sns import sns_pressure_solve, sns_rhs, sns_step
    from src.solvers.stepping import StepperConfig
    from src.spectral import Grid, Parity, SpectralField

    grid = Grid.cube(16)
    state = SnsState(
        SpectralField.zeros(grid, 2, Parity.EVEN), SpectralField.zeros(grid, 0, Parity.ODD), 0.1
    )
    assert np.max(np.abs(sns_pressure_solve(state.v, state.w, 0.1).coefficients)) == 0.0
    dv, dw = sns_rhs(state)
    assert np.max(np.abs(dv.coefficients)) == 0.0
    assert np.max(np.abs(dw.coefficients)) == 0.0
    after = sns_step(state, StepperConfig(dt=1e-2), 1)
    assert np.max(np.abs(after.stacked())) == 0.0


def test_pressure_rejects_non_positive_eps():
    """Test the eps > 0 requirement of the pressure solve."""
    from src.core.errors import ConfigurationError
    from src.solvers.sns import sns_pressure_solve

    state = _sns(0.1)
    with pytest.raises(ConfigurationError):
        sns_pressure_solve(state.v, state.w, 0.0)


def test_pressure_mode_arithmetic():
    """Test that halving eps rescales each mode by the ratio of the anisotropic symbols."""
    from src.solvers.sns import anisotropic_operator, sns_pressure_solve

    state = _sns(0.2, "random")
    grid = state.grid
    rng = np.random.default_rng(0)
    tendencies = rng.standard_normal((3,) + grid.shape) + 1j * rng.standard_normal(
        (3,) + grid.shape
    )
    p1 = sns_pressure_solve(state.v, state.w, 0.2, tendencies).coefficients
    p2 = sns_pressure_solve(state.v, state.w, 0.1, tendencies).coefficients
    a1 = anisotropic_operator(grid, 0.2)
    a2 = anisotropic_operator(grid, 0.1)
    nonzero = a1 > 0
    assert np.allclose(p2[nonzero], p1[nonzero] * a1[nonzero] / a2[nonzero], rtol=1e-12)
    assert p1[0, 0, 0] == 0.0


def test_step_keeps_constraints():
    """Test incompressibility, parity and zero mean after nonlinear steps."""
    from src.core.state import check_sns_state
    from src.solvers.sns import sns_step
    from src.solvers.stepping import StepperConfig

    state = _sns(0.1, "random")
    cfg = StepperConfig(dt=1e-3)
    for n in range(1, 11):
        state = sns_step(state, cfg, n)
    checks = check_sns_state(state)
    assert checks['divergence'] < 1e-10
    assert checks['parity_v'] < 1e-10
    assert checks['parity_w'] < 1e-10
    assert checks['mean'] == 0.0
    assert state.t == pytest.approx(0.01)


def test_isotropic_limit():
    """Test that eps = 1 matches the rotational-form Leray solver."""
    from src.solvers.isotropic import isotropic_step
    from src.solvers.sns import sns_step
    from src.solvers.stepping import StepperConfig

    state = _sns(1.0, "random")
    grid = state.grid
    uh = state.stacked()
    cfg = StepperConfig(dt=1e-3)
    for n in range(1, 21):
        state = sns_step(state, cfg, n)
        uh = isotropic_step(uh, grid, cfg, n)
    assert np.linalg.norm(state.stacked() - uh) < 1e-8 * np.linalg.norm(uh)


def test_isotropic_rhs_oracle():
    """Test the eps = 1 tendency against the isotropic spectral right-hand side."""
    from src.solvers.isotropic import isotropic_rhs
    from src.solvers.sns import sns_rhs

    state = _sns(1.0, "random", seed=7)
    dv, dw = sns_rhs(state)
    ours = np.concatenate([dv.coefficients, dw.coefficients[None]])
    reference = isotropic_rhs(state.stacked(), state.grid)
    assert np.max(np.abs(ours - reference)) < 1e-10 * np.max(np.abs(reference))


def test_diffusion_only_energy_identity():
    """Test that the scaled energy decays as the heat kernel without advection."""
    from src.diagnostics.energy import energy_audit_sns
    from src.solvers.driver import run_sns
    from src.solvers.stepping import StepperConfig

    trajectory = run_sns(_sns(0.1), StepperConfig(dt=1e-3, nonlinear=False), 0.01)
    audit = energy_audit_sns(trajectory, 0.1)
    k2 = 1.0 + math.pi**2
    expected = audit.initial_energy * np.exp(-2.0 * k2 * audit.times)
    assert np.allclose(audit.energy, expected, rtol=1e-12)
    assert np.max(np.abs(audit.slack)) < 1e-3 * audit.initial_energy


def test_run_sns_energy_inequality():
    """Test the energy inequality slack on a short nonlinear run."""
    from src.diagnostics.energy import energy_audit_sns
    from src.solvers.driver import run_sns
    from src.solvers.stepping import StepperConfig

    trajectory = run_sns(_sns(0.1), StepperConfig(dt=1e-3), 0.02)
    audit = energy_audit_sns(trajectory, 0.1)
    assert np.min(audit.slack) >= -1e-4 * audit.initial_energy
    assert "pressure_parity" in trajectory.records[0].names


@pytest.mark.parametrize("eps", [0.2, 0.05])
def test_temporal_order(eps):
    """Test second-order self-convergence in dt."""
    from src.solvers.sns import sns_step
    from src.solvers.stepping import StepperConfig

    finals = []
    for dt in (0.01, 0.005, 0.0025):
        state = _sns(eps)
        cfg = StepperConfig(dt=dt)
        for n in range(1, int(round(0.1 / dt)) + 1):
            state = sns_step(state, cfg, n)
        finals.append(state.stacked())
    e1 = np.linalg.norm(finals[0] - finals[1])
    e2 = np.linalg.norm(finals[1] - finals[2])
    assert math.log2(e1 / e2) >= 1.9


def test_pressure_is_even_in_z():
    """Test that the pressure of random data is even in z and the record reports it."""
    from src.core.state import parity_deviation
    from src.solvers.driver import sns_record
    from src.solvers.sns import sns_pressure_solve
    from src.spectral import Parity

    state = _sns(0.2, recipe="random", seed=5)
    p = sns_pressure_solve(state.v, state.w, state.eps).field
    assert parity_deviation(p, Parity.EVEN) < 1e-12
    assert parity_deviation(p, Parity.ODD) > 0.5
    assert sns_record(state)["pressure_parity"] < 1e-12
