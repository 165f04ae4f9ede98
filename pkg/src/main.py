"""
hydrolimit - PE vs scaled Navier-Stokes verification suite

Entry point for the command line.
"""

import argparse
import logging
import sys
from typing import List, Optional

from src.cli.config import Mode, RunConfig, parse_config
from src.cli.outputs import emit_outputs, preflight
from src.cli.verify import run_property_suite
from src.core.errors import (
    BlowUpError,
    ConfigurationError,
    DegenerateDataError,
    DegenerateFitError,
    InputError,
    InvalidStateError,
    NumericalInconsistencyError,
    OutputError,
)
from src.core.initial_data import RecipeId, make_initial_data
from src.core.state import sns_initial_state
from src.harness.sweep import run_convergence
from src.solvers.driver import run_pe, run_sns

logger = logging.getLogger("hydrolimit")

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_BLOW_UP = 2
EXIT_PROPERTY = 3

INPUT_ERRORS = (
    ConfigurationError,
    DegenerateDataError,
    DegenerateFitError,
    InputError,
    InvalidStateError,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hydrolimit",
        description="Pseudo-spectral primitive equations vs scaled Navier-Stokes suite",
    )
    sub = parser.add_subparsers(dest="mode", required=True)
    for mode in Mode:
        p = sub.add_parser(mode.value)
        p.add_argument("--config", help="key = value configuration file")
        p.add_argument("--n", type=int, help="collocation points per axis")
        p.add_argument("--dt", type=float, help="time step")
        p.add_argument("--t-final", dest="t_final", type=float, help="final time")
        p.add_argument("--eps", help="aspect ratio(s), comma separated")
        p.add_argument("--recipe", choices=[r.value for r in RecipeId])
        p.add_argument("--seed", type=int)
        p.add_argument("--out", help="output directory")
        p.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    return parser


def _status(message: str):
    print(f"[hydrolimit] {message}", file=sys.stderr)


def execute(config: RunConfig) -> int:
    """Run one validated configuration and write its outputs."""
    grid = config.grid
    if config.mode is Mode.RUN_PE:
        trajectory = run_pe(
            make_initial_data(config.initial_recipe, grid),
            config.stepper,
            config.t_final,
            config.output_every,
        )
        emit_outputs(config, pe=trajectory)
        return EXIT_OK

    if config.mode is Mode.RUN_SNS:
        pe = make_initial_data(config.initial_recipe, grid)
        runs = {
            eps: run_sns(
                sns_initial_state(pe, eps), config.stepper, config.t_final, config.output_every
            )
            for eps in config.eps
        }
        emit_outputs(config, sns=runs)
        return EXIT_OK

    if config.mode is Mode.CONVERGE:
        result = run_convergence(
            config.initial_recipe,
            grid,
            config.t_final,
            config.dt,
            config.eps,
            output_every=config.output_every,
            cfl_safety=config.cfl_safety,
            workers=config.workers,
        )
        emit_outputs(config, sweep=result)
        for name, fit in result.fits.items():
            logger.info("%s: slope %.4f, residual %.4f", name, fit.slope, fit.residual)
        for name, monotone in result.monotone.items():
            if not monotone:
                logger.warning("%s does not decrease monotonically with eps", name)
        if not result.fits:
            logger.warning("no norm could be fitted; see fit_errors in the manifest")
        return EXIT_BLOW_UP if result.failed else EXIT_OK

    checks = run_property_suite(config, status_callback=_status)
    emit_outputs(config, checks=checks)
    failed = [c.name for c in checks if not c.passed]
    if failed:
        logger.error("property checks failed: %s", ", ".join(failed))
        return EXIT_PROPERTY
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """Application entry point."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="[%(name)s] %(message)s",
    )
    overrides = {
        'mode': args.mode,
        'n': args.n,
        'dt': args.dt,
        't_final': args.t_final,
        'eps': args.eps,
        'recipe': args.recipe,
        'seed': args.seed,
        'out': args.out,
    }
    try:
        config = parse_config(args.config, overrides)
        preflight(config.out)
        return execute(config)
    except INPUT_ERRORS as e:
        logger.error("configuration error: %s", e)
        return EXIT_CONFIG
    except OutputError as e:
        logger.error("output error: %s", e)
        return EXIT_CONFIG
    except BlowUpError as e:
        logger.error("numerical blow-up: %s", e)
        return EXIT_BLOW_UP
    except NumericalInconsistencyError as e:
        logger.error("numerical inconsistency: %s", e)
        return EXIT_BLOW_UP


if __name__ == "__main__":
    sys.exit(main())
