"""Command-line front end: argument parsing and dispatch."""
from __future__ import annotations

import argparse
import time
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from rich.console import Console

from . import __version__
from .config import load_config, lookup
from .errors import QrrError, to_smart_error
from .formatters import FORMATS, render
from .log import get_logger, level_for_verbosity, setup_logging
from .registry import GROUPS

log = get_logger(__name__)


@dataclass
class AppContext:
    """What every command handler needs besides its own arguments."""

    config: dict[str, Any]
    console: Console
    fmt: str

    def setting(self, key_path: str, default: Any = None) -> Any:
        return lookup(self.config, key_path, default)

    def order(self, args: argparse.Namespace) -> int:
        if getattr(args, "order", None) is not None:
            return int(args.order)
        return int(self.setting("engine.order", 200))

    @property
    def cross_check(self) -> bool:
        return bool(self.setting("engine.cross_check", True))

    @property
    def retries(self) -> int:
        return int(self.setting("engine.margin_retries", 3))


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive, got {value}")
    return value


def _non_negative(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {value}")
    return value


def _global_flags(parser: argparse.ArgumentParser, default: Any) -> None:
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0 if default is None else default,
        help="more logging (-v info, -vv debug)",
    )
    parser.add_argument(
        "--format", choices=FORMATS, default=default, help="output format"
    )
    parser.add_argument(
        "--config", type=Path, default=default, help="config file to use"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qrr",
        description="Exact q-series expansion and identity verification for "
        "the Rogers-Ramanujan continued fraction.",
    )
    _global_flags(parser, None)
    # repeated after the subcommand; SUPPRESS keeps values given before it
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, argparse.SUPPRESS)
    parser.add_argument("--version", action="version", version=f"qrr {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    def order_flag(p: argparse.ArgumentParser) -> None:
        p.add_argument(
            "--order",
            type=_positive,
            help="truncation bound in fifths of q (default: engine.order)",
        )

    p = sub.add_parser("expand", parents=[common], help="expand an expression")
    p.add_argument("expr", metavar="EXPR")
    order_flag(p)

    p = sub.add_parser(
        "verify",
        parents=[common],
        help="verify a registered identity, or --lhs/--rhs",
    )
    p.add_argument("ident", metavar="ID", nargs="?")
    p.add_argument("--id", dest="id_flag", metavar="ID")
    p.add_argument("--lhs")
    p.add_argument("--rhs")
    order_flag(p)

    p = sub.add_parser(
        "verify-all", parents=[common], help="verify every registered identity"
    )
    p.add_argument("--group", choices=(*GROUPS, "all"), default="all")
    p.add_argument("--jobs", type=_positive, help="worker threads")
    order_flag(p)

    p = sub.add_parser("check", parents=[common], help="verify LHS = RHS")
    p.add_argument("lhs", metavar="LHS")
    p.add_argument("rhs", metavar="RHS")
    order_flag(p)

    p = sub.add_parser(
        "dissect", parents=[common], help="keep exponents in one residue class"
    )
    p.add_argument("expr", metavar="EXPR")
    p.add_argument("modulus_pos", metavar="M", nargs="?", type=_positive)
    p.add_argument("residue_pos", metavar="R", nargs="?", type=_non_negative)
    p.add_argument("--modulus", type=_positive)
    p.add_argument("--residue", type=_non_negative)
    order_flag(p)

    p = sub.add_parser(
        "partitions", parents=[common], help="check the colored partition theorems"
    )
    p.add_argument("--theorem", help="theorem id, e.g. 7.1 (default: all)")
    p.add_argument("--max-n", type=_positive)
    p.add_argument(
        "--cross-check",
        type=_non_negative,
        metavar="N",
        help="also compare both counters up to N",
    )

    p = sub.add_parser("list", parents=[common], help="list registered identities")
    p.add_argument("--group", choices=(*GROUPS, "all"), default="all")

    return parser


def _handlers() -> dict[str, Callable[[argparse.Namespace, AppContext], int]]:
    from .commands import expand, listing, partitions, verify

    return {
        "expand": expand.cmd_expand,
        "dissect": expand.cmd_dissect,
        "verify": verify.cmd_verify,
        "verify-all": verify.cmd_verify_all,
        "check": verify.cmd_check,
        "partitions": partitions.cmd_partitions,
        "list": listing.cmd_list,
    }


def main(argv: Sequence[str] | None = None, console: Console | None = None) -> int:
    """
    Run one command.

    Returns:
        0 when everything checked out, 1 on a verification failure and 2 on
        usage, parse or engine errors
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2

    if args.command is None:
        parser.print_help()
        return 2

    config = load_config(args.config)
    configured = str(lookup(config, "logging.level", "WARNING"))
    setup_logging(level_for_verbosity(args.verbose, configured))
    fmt = args.format or str(lookup(config, "output.format", "text"))
    if fmt not in FORMATS:
        log.warning("unknown output.format %r, using text", fmt)
        fmt = "text"
    ctx = AppContext(config, console or Console(), fmt)

    started = time.perf_counter()
    try:
        return _handlers()[args.command](args, ctx)
    except QrrError as exc:
        log.debug("%s failed", args.command, exc_info=True)
        to_smart_error(exc).display()
        return 2
    finally:
        log.debug("%s took %.3fs", args.command, time.perf_counter() - started)


def emit(ctx: AppContext, report: Any) -> int:
    """Render a report and turn it into an exit code."""
    render(report, ctx.fmt, ctx.console)
    return 0 if report.ok else 1


__all__ = ["AppContext", "build_parser", "emit", "main"]
