"""
Plot-ready output for gueedge runs.

Every command produces a Report: named columns, rows, and an optional
summary block (fitted slopes, KS distances). It is written as CSV or JSON
with the run configuration as provenance, and rendered as a rich table on
stderr for the person at the terminal.
"""

import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, TextIO

from rich import box
from rich.console import Console
from rich.table import Table
from rich.text import Text

FLOAT_FORMAT = "%.14e"
OUTPUT_FORMATS = ("csv", "json")


@dataclass
class Report:
    """Rows of one command's output."""

    name: str
    columns: Sequence[str]
    rows: List[Dict[str, Any]] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)

    def add_row(self, **values: Any) -> None:
        self.rows.append({column: values[column] for column in self.columns})


def format_value(value: Any) -> str:
    """Fixed 15-significant-digit scientific notation for floats."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return FLOAT_FORMAT % value
    return str(value)


def format_short(value: Any) -> str:
    """Compact rendering for the terminal table."""
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        if value != 0.0 and (abs(value) < 1e-3 or abs(value) >= 1e4):
            return f"{value:.3e}"
        return f"{value:.6f}"
    return str(value)


def _json_value(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


def to_csv(report: Report, provenance: Dict[str, Any]) -> str:
    buffer = io.StringIO()
    for key, value in provenance.items():
        buffer.write(f"# {key}={format_value(value)}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(report.columns)
    for row in report.rows:
        writer.writerow([format_value(row[column]) for column in report.columns])
    for key, value in report.summary.items():
        buffer.write(f"# {key}={format_value(value)}\n")
    return buffer.getvalue()


def to_json(report: Report, provenance: Dict[str, Any]) -> str:
    payload = {
        "config": {key: _json_value(value) for key, value in provenance.items()},
        "rows": [{key: _json_value(value) for key, value in row.items()} for row in report.rows],
        "summary": {key: _json_value(value) for key, value in report.summary.items()},
    }
    return json.dumps(payload, indent=2) + "\n"


def write_report(
    report: Report,
    provenance: Dict[str, Any],
    output_format: str = "csv",
    output_path: Optional[str] = None,
    stream: Optional[TextIO] = None,
) -> None:
    """Write to output_path, or to stream (stdout by default)."""
    text = to_csv(report, provenance) if output_format == "csv" else to_json(report, provenance)
    if output_path:
        with open(output_path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        return
    (stream or sys.stdout).write(text)


def get_status_color(passed: Any) -> str:
    if passed is True:
        return "green"
    if passed is False:
        return "red"
    return ""


def render_table(report: Report, console: Optional[Console] = None) -> None:
    """Summary table on stderr."""
    console = console or Console(stderr=True)
    table = Table(title=report.name, box=box.ROUNDED, expand=False, pad_edge=False)
    for column in report.columns:
        table.add_column(column, justify="left" if column == "name" else "right", no_wrap=True)
    for row in report.rows:
        cells = []
        for column in report.columns:
            value = row[column]
            cells.append(Text(format_short(value), style=get_status_color(value)))
        table.add_row(*cells)
    console.print(table)
    for key, value in report.summary.items():
        console.print(Text(f"{key}: {format_short(value)}", style="dim"))
