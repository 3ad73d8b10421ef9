"""Rendering of reports as rich text, JSON or CSV."""
from __future__ import annotations

import csv
import io
import json

from rich.console import Console
from rich.markup import escape
from rich.table import Table

from .report import Report

FORMATS = ("text", "json", "csv")

_STATUS_STYLE = {
    "ZERO": "green",
    "PASS": "green",
    "NONZERO": "red",
    "FAIL": "red",
    "ERROR": "red",
}


def to_json(report: Report) -> str:
    return json.dumps(report.to_dict(), indent=2)


def to_csv(report: Report) -> str:
    """
    CSV rows for a report.

    Series reports use the columns exponent_num, exponent_den, coefficient;
    everything else gets one row per checked item.
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    if report.kind == "series":
        writer.writerow(["exponent_num", "exponent_den", "coefficient"])
        for term in report.terms:
            writer.writerow(
                [term.exponent.numerator, term.exponent.denominator, term.coefficient]
            )
    else:
        writer.writerow(
            [
                "id",
                "status",
                "checked_to",
                "first_exponent",
                "first_coefficient",
                "note",
            ]
        )
        for item in report.items:
            data = item.to_dict()
            writer.writerow(
                [
                    item.id,
                    item.status,
                    data["checked_to"] or "",
                    data["first_exponent"] or "",
                    data["first_coefficient"] or "",
                    item.error or item.note or "",
                ]
            )
    return buffer.getvalue()


def series_table(report: Report, max_rows: int | None = None) -> Table:
    table = Table(title=escape(report.command), show_lines=False)
    table.add_column("exponent", justify="right", style="cyan")
    table.add_column("coefficient", justify="right")
    terms = report.terms if max_rows is None else report.terms[:max_rows]
    for term in terms:
        table.add_row(str(term.exponent), str(term.coefficient))
    if max_rows is not None and len(report.terms) > max_rows:
        table.add_row("...", f"{len(report.terms) - max_rows} more")
    if report.precision is not None:
        table.caption = f"+ O(q^{report.precision})"
    return table


def items_table(report: Report) -> Table:
    table = Table(title=escape(report.command))
    grouped = any(item.group for item in report.items)
    table.add_column("id", style="bold")
    if grouped:
        table.add_column("group", style="dim")
    table.add_column("status")
    table.add_column("detail", overflow="fold")
    for item in report.items:
        style = _STATUS_STYLE.get(item.status, "")
        status = f"[{style}]{item.status}[/{style}]" if style else item.status
        if item.error or item.status == "NONZERO":
            detail = item.describe()
        else:
            detail = item.note or item.describe()
        row = [escape(item.id)]
        if grouped:
            row.append(escape(item.group or ""))
        row += [status, escape(detail)]
        table.add_row(*row)
    return table


def render_text(report: Report, console: Console, max_rows: int | None = 60) -> None:
    if report.kind == "series":
        console.print(series_table(report, max_rows))
        return
    console.print(items_table(report))
    if report.kind == "list":
        return
    failed = len(report.failures)
    total = len(report.items)
    if failed:
        console.print(f"[red]✗ {failed} of {total} failed[/red]")
    else:
        console.print(f"[green]✓ {total} of {total} passed[/green]")


def render(report: Report, fmt: str = "text", console: Console | None = None) -> None:
    """
    Print a report.

    Args:
        report: The command result
        fmt: "text", "json" or "csv"
        console: Rich Console instance (creates new one if None)
    """
    if console is None:
        console = Console()
    if fmt == "json":
        console.print(
            to_json(report), markup=False, emoji=False, highlight=False, soft_wrap=True
        )
    elif fmt == "csv":
        console.print(
            to_csv(report),
            markup=False,
            emoji=False,
            highlight=False,
            soft_wrap=True,
            end="",
        )
    else:
        render_text(report, console)


__all__ = [
    "FORMATS",
    "items_table",
    "render",
    "render_text",
    "series_table",
    "to_csv",
    "to_json",
]
