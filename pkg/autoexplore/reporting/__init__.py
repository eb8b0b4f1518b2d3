"""Utilitários de reporte: registros, agregação e CSV."""

from .tables import (
    AxFlags,
    RunRecord,
    aggregate,
    curve_frame,
    format_summary,
    read_runs_csv,
    runs_frame,
    write_csv,
    write_curve_csv,
    write_runs_csv,
    write_summary_csv,
)

__all__ = [
    "AxFlags",
    "RunRecord",
    "aggregate",
    "curve_frame",
    "format_summary",
    "read_runs_csv",
    "runs_frame",
    "write_csv",
    "write_curve_csv",
    "write_runs_csv",
    "write_summary_csv",
]
