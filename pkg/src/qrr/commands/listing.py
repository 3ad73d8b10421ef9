from __future__ import annotations

import argparse

from ..cli import AppContext, emit
from ..report import CheckItem, Report
from .verify import registry_for


def cmd_list(args: argparse.Namespace, ctx: AppContext) -> int:
    """Show the registered identities, optionally one group."""
    registry = registry_for(ctx)
    group = None if args.group == "all" else args.group
    report = Report(f"list {args.group}", "list")
    for entry in registry.entries(group):
        report.items.append(
            CheckItem(
                id=entry.id,
                status="ENTRY",
                group=entry.group,
                note=f"{entry.describe()}  [{entry.citation}]",
                order=entry.min_order,
            )
        )
    return emit(ctx, report)
