from __future__ import annotations

import argparse
import os
import time

from ..cli import AppContext, emit
from ..errors import QrrError
from ..expr import parse, print_canonical, verify
from ..log import get_logger
from ..registry import REGISTRY_ENV, Registry, load_registry
from ..report import CheckItem, Report

log = get_logger(__name__)


def registry_for(ctx: AppContext) -> Registry:
    """The registry, honoring QRR_REGISTRY before the registry.path setting."""
    if os.environ.get(REGISTRY_ENV):
        return load_registry()
    return load_registry(ctx.setting("registry.path"))


def _check_pair(lhs_text: str, rhs_text: str, order: int, ctx: AppContext) -> int:
    started = time.perf_counter()
    lhs, rhs = parse(lhs_text), parse(rhs_text)
    outcome = verify(lhs, rhs, order, ctx.cross_check, ctx.retries)
    ident = f"{print_canonical(lhs)} = {print_canonical(rhs)}"
    report = Report(f"check {ident}", "verify", order)
    report.items.append(CheckItem.from_outcome(ident, outcome, order))
    report.seconds = time.perf_counter() - started
    return emit(ctx, report)


def cmd_check(args: argparse.Namespace, ctx: AppContext) -> int:
    """Verify an ad-hoc identity LHS = RHS."""
    return _check_pair(args.lhs, args.rhs, ctx.order(args), ctx)


def cmd_verify(args: argparse.Namespace, ctx: AppContext) -> int:
    """Verify one registered identity, or an --lhs/--rhs pair."""
    if args.lhs is not None or args.rhs is not None:
        if args.lhs is None or args.rhs is None:
            raise QrrError("--lhs and --rhs must be given together")
        return _check_pair(args.lhs, args.rhs, ctx.order(args), ctx)

    ident = args.id_flag or args.ident
    if ident is None:
        raise QrrError("verify needs an identity id, e.g. qrr verify t1-1")

    registry = registry_for(ctx)
    result = registry.verify(
        ident,
        args.order,
        cross_check=ctx.cross_check,
        retries=ctx.retries,
    )
    report = Report(f"verify {ident}", "verify", result.order, seconds=result.seconds)
    report.items.append(CheckItem.from_entry_result(result))
    return emit(ctx, report)


def cmd_verify_all(args: argparse.Namespace, ctx: AppContext) -> int:
    """Verify every registered identity (of one group)."""
    registry = registry_for(ctx)
    jobs = args.jobs or int(ctx.setting("registry.jobs", 1))
    group = None if args.group == "all" else args.group
    order = args.order if args.order is not None else ctx.setting("engine.order")

    started = time.perf_counter()
    results = registry.verify_all(
        order,
        group=group,
        jobs=jobs,
        cross_check=ctx.cross_check,
        retries=ctx.retries,
    )
    report = Report(f"verify-all {args.group}", "verify", order)
    report.items.extend(CheckItem.from_entry_result(r) for r in results)
    report.seconds = time.perf_counter() - started
    if report.failures:
        log.info("%d entries did not verify", len(report.failures))
    return emit(ctx, report)
