from __future__ import annotations

import argparse
import time

from ..cli import AppContext, emit
from ..partitions import load_partitions
from ..report import Report


def cmd_partitions(args: argparse.Namespace, ctx: AppContext) -> int:
    """Check one colored partition theorem, or all of them."""
    catalog = load_partitions()
    max_n = args.max_n or int(ctx.setting("partitions.max_n", 100))
    cap = int(ctx.setting("partitions.oracle_cap", 60))
    idents = [args.theorem] if args.theorem else list(catalog.theorems)

    started = time.perf_counter()
    report = Report(f"partitions {args.theorem or 'all'} max-n {max_n}", "partitions")
    for ident in idents:
        theorem = catalog.verify_theorem(ident, max_n, args.cross_check, cap)
        report.add_theorem(theorem)
    report.seconds = time.perf_counter() - started
    return emit(ctx, report)
