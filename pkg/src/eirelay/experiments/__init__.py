"""Sweep runner, reports and CLI."""

from eirelay.experiments.config import ConfigError, SweepSpec, load_spec, parse_spec
from eirelay.experiments.report import (
    CSV_FIELDS,
    TargetNotBracketed,
    config_table,
    curves,
    emit_report,
    gain_at_target,
    parse_csv,
    read_csv,
    rows_to_csv,
    snr_at_target,
    summary_text,
)
from eirelay.experiments.runner import ResultRow, curve_id, run_sweep

__all__ = [
    "CSV_FIELDS",
    "ConfigError",
    "ResultRow",
    "SweepSpec",
    "TargetNotBracketed",
    "config_table",
    "curve_id",
    "curves",
    "emit_report",
    "gain_at_target",
    "load_spec",
    "parse_csv",
    "parse_spec",
    "read_csv",
    "rows_to_csv",
    "run_sweep",
    "snr_at_target",
    "summary_text",
]
