"""
Output files of a run: diagnostics CSVs, rates.csv, manifest.json and checkpoints.

Floats are written with 17 significant digits and the manifest has sorted keys
and no timestamps, so identical inputs give byte-identical files.
"""

import csv
import hashlib
import json
import logging
import os
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence

from src.cli.config import RunConfig
from src.core.errors import OutputError
from src.core.protocol import write_checkpoint
from src.diagnostics.energy import energy_audit_pe, energy_audit_sns
from src.harness.report import SERIES, NormId, norm_value
from src.harness.sweep import SweepResult
from src.solvers.driver import Trajectory
from src.spectral import lambda1

logger = logging.getLogger(__name__)

PE_COLUMNS = (
    "t",
    "v_l2",
    "grad_v_l2",
    "v_l4",
    "dz_v_l2",
    "lap_v_l2",
    "grad_lap_v_l2",
    "v_grad_v_l2",
    "dt_v_l2",
    "grad_dt_v_l2",
    "energy_residual",
    "decay_slack",
)
SNS_COLUMNS = (
    "t",
    "v_l2",
    "eps_w_l2",
    "grad_v_l2",
    "eps_grad_w_l2",
    "divergence_l2",
    "energy_slack",
    "pressure_parity",
)
DIFF_COLUMNS = ("t",) + SERIES + ("energy_slack",)
RATES_COLUMNS = ("norm_id", "eps", "error", "excluded", "slope", "intercept", "residual")

COLUMN_DOCS = {
    "diagnostics_pe.csv": list(PE_COLUMNS),
    "diagnostics_sns_eps<eps>.csv": list(SNS_COLUMNS),
    "diff_eps<eps>.csv": list(DIFF_COLUMNS),
    "rates.csv": list(RATES_COLUMNS),
}


def fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def preflight(out: str) -> Path:
    """Create the output directory and make sure it is writable."""
    path = Path(out)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise OutputError(e.errno, f"cannot create output directory {path}: {e.strerror}")
    if not path.is_dir() or not os.access(path, os.W_OK):
        raise OutputError(f"output directory {path} is not writable")
    return path


def write_csv(path: Path, columns: Sequence[str], rows: Iterable[Sequence]) -> Path:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([fmt(value) for value in row])
    logger.info("wrote %s", path)
    return path


def eps_label(eps: float) -> str:
    return format(eps, "g")


def pe_rows(trajectory: Trajectory, lam1: float) -> List[List[float]]:
    audit = energy_audit_pe(trajectory, lam1)
    rows = []
    for i, record in enumerate(trajectory.records):
        row = [record.t] + [record[name] for name in PE_COLUMNS[1:-2]]
        rows.append(row + [float(audit.residual[i]), float(audit.slack[i])])
    return rows


def sns_rows(trajectory: Trajectory, eps: float) -> List[List[float]]:
    audit = energy_audit_sns(trajectory, eps)
    rows = []
    for i, record in enumerate(trajectory.records):
        head = [record.t] + [record[name] for name in SNS_COLUMNS[1:-2]]
        rows.append(head + [float(audit.slack[i]), record["pressure_parity"]])
    return rows


def rates_rows(result: SweepResult, norms: Sequence[NormId] = tuple(NormId)) -> List[list]:
    """One row per (norm, eps); fit columns repeat per norm and are nan without a fit."""
    rows = []
    for norm_id in norms:
        fit = result.fits.get(NormId(norm_id).value)
        for report in result.reports:
            error = norm_value(report, norm_id) if not report.failed else float("nan")
            excluded = int(fit is not None and report.eps in fit.excluded)
            if fit is None:
                tail = [float("nan")] * 3
            else:
                tail = [fit.slope, fit.intercept, fit.residual]
            rows.append([NormId(norm_id).value, report.eps, error, excluded] + tail)
    return rows


def config_hash(config: RunConfig) -> str:
    canonical = json.dumps(config.as_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def write_manifest(
    out: Path,
    config: RunConfig,
    files: Sequence[str],
    extra: Optional[Mapping] = None,
) -> Path:
    manifest = {
        "config": config.as_dict(),
        "config_sha256": config_hash(config),
        "columns": {name: cols for name, cols in COLUMN_DOCS.items()},
        "files": sorted(files),
    }
    manifest.update(extra or {})
    path = out / "manifest.json"
    path.write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n")
    logger.info("wrote %s", path)
    return path


def emit_outputs(
    config: RunConfig,
    pe: Optional[Trajectory] = None,
    sns: Optional[Mapping[float, Trajectory]] = None,
    sweep: Optional[SweepResult] = None,
    checks: Optional[Sequence] = None,
) -> List[Path]:
    """
    Write every output of a run into ``config.out`` and finish with the manifest.

    Overwrites existing files; identical inputs produce identical bytes.
    """
    out = preflight(config.out)
    written: List[Path] = []
    extra: Dict[str, object] = {}

    if pe is not None:
        rows = pe_rows(pe, lambda1(config.grid))
        written.append(write_csv(out / "diagnostics_pe.csv", PE_COLUMNS, rows))
        if config.checkpoint and pe.final_state is not None:
            written.append(write_checkpoint(out / "pe_final.chk", pe.final_state))

    for eps, trajectory in sorted((sns or {}).items(), reverse=True):
        label = eps_label(eps)
        rows = sns_rows(trajectory, eps)
        written.append(write_csv(out / f"diagnostics_sns_eps{label}.csv", SNS_COLUMNS, rows))
        if config.checkpoint and trajectory.final_state is not None:
            path = out / f"sns_eps{label}_final.chk"
            written.append(write_checkpoint(path, trajectory.final_state))

    if sweep is not None:
        for report in sweep.reports:
            rows = [
                [t] + [report.series[name][i] for name in SERIES] + [report.energy_slack[i]]
                for i, t in enumerate(report.times)
            ]
            path = out / f"diff_eps{eps_label(report.eps)}.csv"
            written.append(write_csv(path, DIFF_COLUMNS, rows))
        written.append(write_csv(out / "rates.csv", RATES_COLUMNS, rates_rows(sweep)))
        extra["exclusions"] = sweep.exclusions
        extra["fit_errors"] = dict(sorted(sweep.fit_errors.items()))
        extra["failed_eps"] = sweep.failed
        extra["monotone"] = sweep.monotone
        extra["fits"] = {
            name: {"slope": fit.slope, "intercept": fit.intercept, "residual": fit.residual}
            for name, fit in sorted(sweep.fits.items())
        }

    if checks is not None:
        extra["verify"] = [
            {"name": c.name, "passed": c.passed, "value": c.value, "threshold": c.threshold}
            for c in checks
        ]

    written.append(write_manifest(out, config, [p.name for p in written], extra))
    return written
