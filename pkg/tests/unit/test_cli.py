"""Unit tests for configuration, output files, the property checks and the entry point."""

import filecmp
import json
import math

import pytest


def test_minimal_config_is_accepted():
    """Test the smallest valid configuration."""
    from src.cli.config import Mode, parse_config
    from src.core.initial_data import RecipeId

    cfg = parse_config(overrides={'n': 16, 'dt': 1e-3, 't_final': 0.1, 'recipe': 'single-mode'})
    assert cfg.mode is Mode.RUN_PE
    assert cfg.recipe is RecipeId.SINGLE_MODE
    assert cfg.steps == 100
    assert cfg.grid.shape == (16, 16, 16)


def test_config_errors():
    """Test the validation messages."""
    from src.cli.config import parse_config
    from src.core.errors import ConfigurationError

    with pytest.raises(ConfigurationError, match="dt must be positive"):
        parse_config(overrides={'dt': 0.0})
    with pytest.raises(ConfigurationError, match="need ≥ 3 epsilons"):
        parse_config(overrides={'mode': 'converge', 'eps': '0.2, 0.1'})
    with pytest.raises(ConfigurationError, match="even integer"):
        parse_config(overrides={'n': 17})
    with pytest.raises(ConfigurationError, match="strictly decreasing"):
        parse_config(overrides={'eps': '0.1, 0.2, 0.05'})
    with pytest.raises(ConfigurationError, match="multiple of dt"):
        parse_config(overrides={'dt': 0.03, 't_final': 0.1})
    with pytest.raises(ConfigurationError, match="unknown key"):
        parse_config(overrides={'viscosity': 2.0})


def test_config_file(tmp_path):
    """Test file parsing, comments, overrides and line numbers in errors."""
    from src.cli.config import parse_config
    from src.core.errors import ConfigurationError

    path = tmp_path / "run.cfg"
    path.write_text("# desk run\nn = 16\neps = 0.2, 0.1, 0.05  # sweep\ncheckpoint = yes\n")
    cfg = parse_config(path, overrides={'n': 24, 'seed': None})
    assert cfg.n == 24
    assert cfg.eps == (0.2, 0.1, 0.05)
    assert cfg.checkpoint is True
    assert cfg.seed == 42

    path.write_text("n = 16\ndt = -1\n")
    with pytest.raises(ConfigurationError) as info:
        parse_config(path)
    assert info.value.line == 2
    assert "line 2: dt must be positive" in str(info.value)

    path.write_text("n = sixteen\n")
    with pytest.raises(ConfigurationError, match="line 1"):
        parse_config(path)


def test_float_format():
    """Test that floats keep 17 significant digits."""
    from src.cli.outputs import fmt

    assert fmt(0.1) == "0.10000000000000001"
    assert fmt(3) == "3"


def test_preflight(tmp_path):
    """Test output directory creation and the unwritable case."""
    from src.cli.outputs import preflight
    from src.core.errors import OutputError

    assert preflight(str(tmp_path / "a" / "b")).is_dir()
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(OutputError):
        preflight(str(blocker))


def test_config_hash_is_stable():
    """Test that equal configurations hash equally."""
    from src.cli.config import parse_config
    from src.cli.outputs import config_hash

    a = parse_config(overrides={'n': 16})
    b = parse_config(overrides={'n': '16'})
    c = parse_config(overrides={'n': 18})
    assert config_hash(a) == config_hash(b)
    assert config_hash(a) != config_hash(c)


def test_verify_manifest_only(tmp_path):
    """Test that an empty check list writes the manifest alone."""
    from src.cli.config import parse_config
    from src.cli.outputs import emit_outputs

    cfg = parse_config(overrides={'mode': 'verify', 'out': str(tmp_path)})
    written = emit_outputs(cfg, checks=[])
    assert [p.name for p in written] == ["manifest.json"]
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["verify"] == []
    assert manifest["config"]["mode"] == "verify"


def test_rates_rows_cardinality():
    """Test one rates row per norm and eps, with nan fit columns when unfitted."""
    from src.cli.outputs import rates_rows
    from src.harness.report import SERIES, DiffReport, NormId
    from src.harness.sweep import SweepResult

    reports = []
    for eps in (0.2, 0.1, 0.05):
        report = DiffReport(eps=eps)
        report.append(0.0, {name: eps for name in SERIES})
        reports.append(report)
    rows = rates_rows(SweepResult(reports=tuple(reports)))
    assert len(rows) == len(NormId) * 3
    assert all(math.isnan(row[4]) for row in rows)


def test_basic_property_checks():
    """Test the closed-form checks of the property suite on a small grid."""
    from src.cli.config import parse_config
    from src.cli.verify import (
        check_derivative,
        check_diagnostic_w,
        check_heat_kernel,
        check_pe_pressure,
        check_round_trip,
    )
    from src.spectral import Grid

    grid = Grid.cube(16)
    cfg = parse_config(overrides={'n': 16, 'mode': 'verify'})
    results = check_round_trip(grid) + [
        check_derivative(grid),
        check_diagnostic_w(grid),
        check_pe_pressure(cfg),
        check_heat_kernel(grid),
    ]
    failed = [r.name for r in results if not r.passed]
    assert failed == []


def test_main_run_pe(tmp_path):
    """Test the run-pe subcommand and byte-identical reruns."""
    from src.main import main

    args = ["run-pe", "--n", "16", "--dt", "0.001", "--t-final", "0.003"]
    assert main(args + ["--out", str(tmp_path / "one")]) == 0
    assert main(args + ["--out", str(tmp_path / "two")]) == 0
    first = (tmp_path / "one" / "diagnostics_pe.csv").read_bytes()
    second = (tmp_path / "two" / "diagnostics_pe.csv").read_bytes()
    assert first == second
    lines = first.decode().splitlines()
    assert lines[0].startswith("t,v_l2,grad_v_l2")
    assert len(lines) == 5
    assert (tmp_path / "one" / "manifest.json").exists()


def test_main_run_sns(tmp_path):
    """Test that run-sns writes one diagnostics file per eps."""
    from src.main import main

    out = tmp_path / "sns"
    args = ["run-sns", "--n", "16", "--dt", "0.001", "--t-final", "0.002", "--eps", "0.5,0.2"]
    assert main(args + ["--out", str(out)]) == 0
    assert (out / "diagnostics_sns_eps0.5.csv").exists()
    assert (out / "diagnostics_sns_eps0.2.csv").exists()


def test_main_configuration_error(tmp_path):
    """Test the exit code of an invalid configuration."""
    from src.main import EXIT_CONFIG, main

    assert main(["converge", "--eps", "0.2,0.1", "--out", str(tmp_path)]) == EXIT_CONFIG
    assert main(["run-pe", "--dt", "0", "--out", str(tmp_path)]) == EXIT_CONFIG


def test_acceptance_config():
    """Test that the shipped acceptance configuration is the single-mode unit-amplitude sweep."""
    from pathlib import Path

    from src.cli.config import parse_config
    from src.core.initial_data import RecipeId

    scripts = Path(__file__).resolve().parents[2] / "scripts"
    cfg = parse_config(scripts / "acceptance.cfg", overrides={'mode': 'converge'})
    assert cfg.recipe is RecipeId.SINGLE_MODE
    assert cfg.amplitude == 1.0
    assert cfg.t_final == 1.0
    assert cfg.dt == 5e-4
    assert cfg.n == 32
    assert cfg.l1 == pytest.approx(2 * math.pi)
    assert cfg.eps == (0.2, 0.1, 0.05)

    extra = parse_config(scripts / "acceptance_random.cfg", overrides={'mode': 'converge'})
    assert extra.recipe is RecipeId.RANDOM


def test_main_converge_is_reproducible(tmp_path):
    """Test that two converge runs write byte-identical rates and record monotonicity."""
    from src.harness.report import NormId
    from src.main import main

    args = ["converge", "--n", "16", "--dt", "0.001", "--t-final", "0.01"]
    assert main(args + ["--out", str(tmp_path / "one")]) == 0
    assert main(args + ["--out", str(tmp_path / "two")]) == 0
    first, second = tmp_path / "one" / "rates.csv", tmp_path / "two" / "rates.csv"
    assert filecmp.cmp(first, second, shallow=False)
    manifest = json.loads((tmp_path / "one" / "manifest.json").read_text())
    assert set(manifest["monotone"]) == {
        NormId.THM11_SUP_L2.value,
        NormId.THM12_SUP_W_L2.value,
    }


def test_main_converge_warns_without_fits(tmp_path, monkeypatch, caplog):
    """Test that a sweep with no fitted norm is reported at warning level."""
    import logging

    import src.main
    from src.harness.report import SERIES, DiffReport
    from src.harness.sweep import SweepResult

    def no_fits(*args, **kwargs):
        reports = []
        for eps in (0.2, 0.1, 0.05):
            report = DiffReport(eps=eps)
            report.append(0.0, {name: eps for name in SERIES})
            reports.append(report)
        return SweepResult(reports=tuple(reports), fit_errors={"thm1.1-sup-l2": "below floor"})

    monkeypatch.setattr(src.main, "run_convergence", no_fits)
    with caplog.at_level(logging.WARNING, logger="hydrolimit"):
        assert src.main.main(["converge", "--out", str(tmp_path)]) == 0
    assert "no norm could be fitted" in caplog.text
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["monotone"] == {"thm1.1-sup-l2": True, "thm1.2-sup-w-l2": True}


def test_main_maps_state_errors_to_exit_codes(tmp_path, monkeypatch):
    """Test that input, state and consistency errors end in documented exit codes."""
    import src.main
    from src.core.errors import InputError, InvalidStateError, NumericalInconsistencyError

    args = ["run-pe", "--n", "16", "--out", str(tmp_path)]
    for error, code in (
        (InputError("bad trajectory"), src.main.EXIT_CONFIG),
        (InvalidStateError("not admissible"), src.main.EXIT_CONFIG),
        (NumericalInconsistencyError("rhs vanished"), src.main.EXIT_BLOW_UP),
    ):

        def fail(config, error=error):
            raise error

        monkeypatch.setattr(src.main, "execute", fail)
        assert src.main.main(args) == code
