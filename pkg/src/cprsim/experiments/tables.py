"""Experiment output: CSV / JSON / gnuplot tables, trial CSV, JSON manifest and console tables.

Column order per experiment:

    success-rate      k, M, L, snr_db, trials, successes, rate, k_over_M
    phase-transition  k, target, min_M, rate, ref_4k_log2, ref_8k_ln
    noise-sweep       k, M, snr_db, variant, trials, mean_mse, mse_db, std_error, success_rate
    trials            experiment, k, M, L, snr_db, variant, trial, seed, success, mse,
                      stage1_residual, iterations, converged, error

Trial files leave out wall time so that reruns are byte-identical; the
manifest carries timing.
"""

import csv
import json
import math
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from rich.table import Table

from cprsim import __version__
from cprsim.experiments.sweeps import NOT_REACHED, ExperimentResult, NoiseRow, SuccessRow, TransitionRow
from cprsim.experiments.trials import TrialRecord
from cprsim.model.config import NOISELESS, ExperimentConfig, OutputFormat
from cprsim.model.validation import save_config

SUCCESS_COLUMNS = ["k", "M", "L", "snr_db", "trials", "successes", "rate", "k_over_M"]
TRANSITION_COLUMNS = ["k", "target", "min_M", "rate", "ref_4k_log2", "ref_8k_ln"]
NOISE_COLUMNS = ["k", "M", "snr_db", "variant", "trials", "mean_mse", "mse_db", "std_error", "success_rate"]
TRIAL_COLUMNS = [
    "experiment", "k", "M", "L", "snr_db", "variant", "trial", "seed",
    "success", "mse", "stage1_residual", "iterations", "converged", "error",
]


def row_values(row: SuccessRow | TransitionRow | NoiseRow) -> dict[str, Any]:
    """Column -> value mapping for an aggregate row (None marks a missing value)."""
    if isinstance(row, SuccessRow):
        values = [row.k, row.measurements, row.rows, row.snr_db, row.trials, row.successes, row.rate, row.k_over_m]
        return dict(zip(SUCCESS_COLUMNS, values, strict=True))
    if isinstance(row, TransitionRow):
        values = [row.k, row.target, row.min_measurements, row.rate, row.reference_log2, row.reference_ln]
        return dict(zip(TRANSITION_COLUMNS, values, strict=True))
    values = [
        row.k, row.measurements, row.snr_db, row.variant, row.trials,
        row.mean_mse, row.mse_db, row.std_error, row.success_rate,
    ]
    return dict(zip(NOISE_COLUMNS, values, strict=True))


def trial_values(record: TrialRecord) -> dict[str, Any]:
    """Column -> value mapping for a trial record (wall time excluded)."""
    values = [
        record.experiment, record.k, record.measurements, record.rows, record.snr_db, record.variant,
        record.trial, record.seed, record.success, record.mse, record.stage1_residual,
        record.iterations, record.converged, record.error,
    ]
    return dict(zip(TRIAL_COLUMNS, values, strict=True))


def columns_for(result: ExperimentResult) -> list[str]:
    """Column order of the aggregate table."""
    if result.rows and isinstance(result.rows[0], TransitionRow):
        return TRANSITION_COLUMNS
    if result.rows and isinstance(result.rows[0], NoiseRow):
        return NOISE_COLUMNS
    return SUCCESS_COLUMNS


def _text_cell(column: str, value: Any) -> str:
    if value is None:
        if column == "snr_db":
            return NOISELESS
        if column == "min_M":
            return NOT_REACHED
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _gnuplot_cell(value: Any) -> str:
    if value is None:
        return "NaN"
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value) if math.isfinite(value) else ("Inf" if value > 0 else "-Inf")
    return str(value)


def _json_value(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    return value


def write_csv(columns: list[str], rows: list[dict[str, Any]], path: Path) -> Path:
    """Write rows as CSV with a header line."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_text_cell(column, row[column]) for column in columns])
    return path


def write_gnuplot(columns: list[str], rows: list[dict[str, Any]], path: Path) -> Path:
    """Whitespace columns, '#' header, blank line between k blocks."""
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = ["# " + " ".join(columns)]
    previous_k = None
    for row in rows:
        if previous_k is not None and row["k"] != previous_k:
            lines.append("")
        previous_k = row["k"]
        lines.append(" ".join(_gnuplot_cell(row[column]) for column in columns))
    path.write_text("\n".join(lines) + "\n")
    return path


def write_json(experiment: str, columns: list[str], rows: list[dict[str, Any]], path: Path) -> Path:
    """Write rows as a JSON document."""
    path.parent.mkdir(parents=True, exist_ok=True)
    document = {
        "experiment": experiment,
        "columns": columns,
        "rows": [{column: _json_value(row[column]) for column in columns} for row in rows],
    }
    with path.open("w") as f:
        json.dump(document, f, indent=2)
        f.write("\n")
    return path


def sibling(path: Path, tag: str, suffix: str) -> Path:
    """results.csv -> results.<tag><suffix>."""
    return path.with_name(f"{path.stem}.{tag}{suffix}")


def write_manifest(
    path: Path,
    result: ExperimentResult,
    config: ExperimentConfig,
    elapsed: float,
    outputs: list[Path],
) -> Path:
    """Write the JSON manifest with config, version and timing."""
    manifest = {
        "experiment": result.experiment,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "version": __version__,
        "config": config.model_dump(mode="json"),
        "measurement_grid": config.measurement_grid(),
        "trials": len(result.records),
        "elapsed_seconds": round(elapsed, 3),
        "trial_seconds": round(sum(r.wall_time for r in result.records), 3),
        "outputs": [p.name for p in outputs],
    }
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w") as f:
        json.dump(manifest, f, indent=2)
    return path


def write_result(
    result: ExperimentResult,
    config: ExperimentConfig,
    path: Path,
    output_format: OutputFormat,
    elapsed: float,
) -> list[Path]:
    """Write the aggregate table, the trial CSV, the resolved config and the manifest next to it."""
    columns = columns_for(result)
    rows = [row_values(row) for row in result.rows]
    if output_format == OutputFormat.JSON:
        table = write_json(result.experiment, columns, rows, path)
    elif output_format == OutputFormat.GNUPLOT:
        table = write_gnuplot(columns, rows, path)
    else:
        table = write_csv(columns, rows, path)

    trials = write_csv(TRIAL_COLUMNS, [trial_values(r) for r in result.records], sibling(path, "trials", ".csv"))
    resolved = save_config(config, sibling(path, "config", ".yaml"))
    manifest = write_manifest(sibling(path, "manifest", ".json"), result, config, elapsed, [table, trials, resolved])
    return [table, trials, resolved, manifest]


def render_table(result: ExperimentResult, title: str) -> Table:
    """Rich table of the aggregate rows."""
    columns = columns_for(result)
    table = Table(title=title)
    for column in columns:
        table.add_column(column, justify="left" if column in ("variant",) else "right")
    for row in result.rows:
        values = row_values(row)
        cells = []
        for column in columns:
            value = values[column]
            if isinstance(value, float) and column not in ("target",):
                cells.append(f"{value:.4g}")
            else:
                cells.append(_text_cell(column, value))
        table.add_row(*cells)
    return table
