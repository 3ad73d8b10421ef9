from __future__ import annotations

import argparse
import time

from ..cli import AppContext, emit
from ..errors import QrrError
from ..expr import evaluate, parse, print_canonical
from ..report import Report


def _expanded(text: str, order: int, ctx: AppContext):
    node = parse(text)
    series = evaluate(node, order, ctx.cross_check, ctx.retries)
    return node, series.truncated(order)


def cmd_expand(args: argparse.Namespace, ctx: AppContext) -> int:
    """Print the coefficients of an expression below q^(order/5)."""
    order = ctx.order(args)
    started = time.perf_counter()
    node, series = _expanded(args.expr, order, ctx)
    report = Report.for_series(f"expand {print_canonical(node)}", series, order)
    report.seconds = time.perf_counter() - started
    return emit(ctx, report)


def cmd_dissect(args: argparse.Namespace, ctx: AppContext) -> int:
    """
    Keep the terms q^n of an expression with n = residue (mod modulus).

    Modulus and residue may be given positionally or as flags.
    """
    modulus = args.modulus if args.modulus is not None else args.modulus_pos
    residue = args.residue if args.residue is not None else args.residue_pos
    if modulus is None or residue is None:
        raise QrrError(
            "dissect needs a modulus and a residue, e.g. --modulus 5 --residue 2"
        )

    order = ctx.order(args)
    started = time.perf_counter()
    node, series = _expanded(args.expr, order, ctx)
    dissected = series.dissect(modulus, residue)
    report = Report.for_series(
        f"dissect {print_canonical(node)} mod {modulus} = {residue % modulus}",
        dissected,
        order,
    )
    report.seconds = time.perf_counter() - started
    return emit(ctx, report)
