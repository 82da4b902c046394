"""Output formatting utilities for entropies, balls and tables."""

import csv
import io
import json
from collections.abc import Iterable, Sequence
from typing import Any

import click
from rich.console import Console
from rich.panel import Panel
from rich.syntax import Syntax
from rich.table import Table

from .entropy import EntropyReport

console = Console()

REPORT_FIELDS = ["kind", "k", "q", "word", "direction", "method", "entropy_bits"]


def format_bits(value: float) -> str:
    """Fixed 12-decimal rendering used for every entropy and bound."""
    return f"{value:.12f}"


def format_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return format_bits(value)
    return str(value)


def format_report(report: EntropyReport, format_type: str) -> str:
    """
    Format an entropy report according to the specified format.

    Args:
        report: Entropy report to render
        format_type: Output format ('csv', 'json', or 'pretty')

    Returns:
        Formatted string representation of the report
    """
    if format_type == "csv":
        return _format_csv(report)
    elif format_type == "json":
        return _format_json(report)
    elif format_type == "pretty":
        return _format_pretty(report)
    else:
        raise ValueError(f"Unknown format type: {format_type}")


def _csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_cell(value) for value in row])
    return buffer.getvalue().rstrip("\n")


def _format_csv(report: EntropyReport) -> str:
    """Format as a header line plus one row."""
    record = report.as_record()
    return _csv_text(REPORT_FIELDS, [[record[name] for name in REPORT_FIELDS]])


def _format_json(report: EntropyReport) -> str:
    """Format as pretty-printed JSON."""
    return json.dumps(report.as_record(), indent=2)


def _format_pretty(report: EntropyReport) -> str:
    """Format as human-readable text."""
    channel = report.channel
    lines = [
        f"Channel:   {channel.label} over q={channel.q}",
        f"Word:      {report.word}",
        f"Direction: {report.direction.value}",
        f"Method:    {report.method.value}",
        f"Entropy:   {format_bits(report.entropy_bits)} bits",
    ]
    if report.spectrum:
        spectrum = ", ".join(f"{value}x{mult}" for value, mult in report.spectrum)
        lines.append(f"Spectrum:  {spectrum}")
    return "\n".join(lines)


def print_report(report: EntropyReport, format_type: str, output_file: str | None = None):
    """
    Print a formatted report to the console, or save it to a file.

    Args:
        report: Entropy report to render
        format_type: Output format ('csv', 'json', or 'pretty')
        output_file: Optional file path to save output instead of printing
    """
    if output_file:
        content = format_report(report, format_type)
        with open(output_file, "w") as f:
            f.write(content + "\n")
        return

    if format_type == "json":
        console.print(Syntax(_format_json(report), "json", theme="monokai"))
    elif format_type == "pretty":
        title = f"H^{report.direction.value} {report.channel.label}"
        console.print(Panel(_format_pretty(report), title=title, border_style="blue"))
    else:
        # CSV bypasses rich so long rows are never wrapped
        click.echo(format_report(report, format_type))


def write_csv(header: Sequence[str], rows: Iterable[Sequence[Any]], out: str = "-"):
    """
    Write a header and rows as CSV to a path, or to stdout for '-'.

    Args:
        header: Column names, always emitted
        rows: Row values; floats use format_bits
        out: Output path or '-'
    """
    text = _csv_text(header, rows)
    if out == "-":
        click.echo(text)
        return
    with open(out, "w", newline="") as f:
        f.write(text + "\n")


def print_table(title: str, header: Sequence[str], rows: Iterable[Sequence[Any]]):
    """Render rows as a rich table on stdout."""
    table = Table(title=title, header_style="bold blue")
    for name in header:
        table.add_column(name, justify="left" if name in ("word", "case") else "right")
    for row in rows:
        table.add_row(*(format_cell(value) for value in row))
    console.print(table)


def emit_rows(
    header: Sequence[str],
    rows: Iterable[Sequence[Any]],
    *,
    format_type: str = "csv",
    out: str = "-",
    title: str = "",
):
    """
    Emit tabular output: a rich table for 'pretty' on stdout, CSV otherwise.

    JSON renders a list of objects keyed by the header.
    """
    rows = list(rows)
    if format_type == "pretty" and out == "-":
        print_table(title, header, rows)
    elif format_type == "json":
        records = [dict(zip(header, row, strict=True)) for row in rows]
        text = json.dumps(records, indent=2)
        if out == "-":
            click.echo(text)
        else:
            with open(out, "w") as f:
                f.write(text + "\n")
    elif format_type in ("csv", "pretty"):
        write_csv(header, rows, out)
    else:
        raise ValueError(f"Unknown format type: {format_type}")
