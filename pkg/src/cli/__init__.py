"""CLI module - run configuration, output files and the property suite."""

from src.cli.config import Mode, RunConfig, parse_config, read_config_file
from src.cli.outputs import (
    DIFF_COLUMNS,
    PE_COLUMNS,
    RATES_COLUMNS,
    SNS_COLUMNS,
    config_hash,
    emit_outputs,
    preflight,
    write_manifest,
)
from src.cli.verify import CheckResult, run_property_suite

__all__ = [
    'CheckResult',
    'DIFF_COLUMNS',
    'Mode',
    'PE_COLUMNS',
    'RATES_COLUMNS',
    'RunConfig',
    'SNS_COLUMNS',
    'config_hash',
    'emit_outputs',
    'parse_config',
    'preflight',
    'read_config_file',
    'run_property_suite',
    'write_manifest',
]
