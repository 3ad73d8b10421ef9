"""
Identity registry: the transcribed catalog and its batch verifier.

The catalog ships as ``data/identities.yaml``. It is parsed once into
immutable entries; verification never mutates the registry, so entries may
be checked from several threads at once.
"""

from __future__ import annotations

import os
import time
from collections.abc import Mapping
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any

import yaml

from .config import get_config_value
from .errors import (
    ExprError,
    QrrError,
    RegistryFormatError,
    UnknownGroup,
    UnknownId,
)
from .expr import Expr, parse, prefix_classes, verify
from .log import get_logger
from .series import VerifyOutcome
from .suggestions import get_group_suggestions, get_id_suggestions

__all__ = [
    "GROUPS",
    "EntryResult",
    "IdentityEntry",
    "Registry",
    "load_registry",
]

log = get_logger(__name__)

REGISTRY_ENV = "QRR_REGISTRY"

# catalog display order
GROUPS: tuple[str, ...] = (
    "main",
    "corollary",
    "gh",
    "lemma",
    "intermediate",
    "concluding",
    "classical",
)

DEFAULT_MIN_ORDER = 200
GROUP_MIN_ORDER: dict[str, int] = {"concluding": 600}

_REQUIRED = ("id", "group", "lhs", "rhs", "citation")


@dataclass(frozen=True)
class IdentityEntry:
    """One catalog identity, ``lhs == rhs``."""

    id: str
    group: str
    lhs: Expr
    rhs: Expr
    lhs_text: str
    rhs_text: str
    citation: str
    min_order: int
    display: str | None = None

    @property
    def prefix_balance(self) -> tuple[frozenset[int], frozenset[int]]:
        """Fractional prefix classes (mod 5) of each side."""
        return prefix_classes(self.lhs), prefix_classes(self.rhs)

    @property
    def balanced(self) -> bool:
        left, right = self.prefix_balance
        return len(left) == 1 and left == right

    def describe(self) -> str:
        if self.display:
            return self.display
        return f"{self.lhs_text} = {self.rhs_text}"


@dataclass(frozen=True)
class EntryResult:
    """Outcome of verifying one entry; ``error`` is set when evaluation failed."""

    id: str
    group: str
    order: int
    seconds: float
    outcome: VerifyOutcome | None = None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.outcome is not None and self.outcome.ok

    @property
    def status(self) -> str:
        if self.outcome is None:
            return "ERROR"
        return self.outcome.status.value


class Registry:
    """Immutable, ordered collection of identity entries."""

    def __init__(
        self,
        entries: list[IdentityEntry],
        definitions: Mapping[str, Expr] | None = None,
        source: str = "<memory>",
    ) -> None:
        self._entries = tuple(entries)
        self._by_id = {entry.id: entry for entry in self._entries}
        self.definitions = dict(definitions or {})
        self.source = source

    @classmethod
    def load(cls, path: str | Path | None = None) -> Registry:
        """
        Load the catalog.

        Resolution order: explicit ``path``, the ``QRR_REGISTRY`` environment
        variable, the ``registry.path`` config key, then the packaged file.
        """
        resolved = _resolve_path(path)
        if resolved is None:
            text = (
                resources.files("qrr")
                .joinpath("data", "identities.yaml")
                .read_text(encoding="utf-8")
            )
            source = "qrr/data/identities.yaml"
        else:
            try:
                text = resolved.read_text(encoding="utf-8")
            except OSError as exc:
                raise RegistryFormatError(
                    f"cannot read registry {resolved}: {exc}"
                ) from exc
            source = str(resolved)
        log.debug("loading registry from %s", source)
        return cls.from_text(text, source)

    @classmethod
    def from_text(cls, text: str, source: str = "<memory>") -> Registry:
        try:
            data = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            raise RegistryFormatError(f"{source}: not valid YAML ({exc})") from exc
        if not isinstance(data, dict):
            raise RegistryFormatError(f"{source}: expected a mapping at top level")
        return cls.from_data(data, source)

    @classmethod
    def from_data(cls, data: Mapping[str, Any], source: str = "<memory>") -> Registry:
        definitions = _parse_definitions(data.get("definitions") or {}, source)
        raw_entries = data.get("identities") or []
        if not isinstance(raw_entries, list):
            raise RegistryFormatError(f"{source}: 'identities' must be a list")

        entries: list[IdentityEntry] = []
        seen: set[str] = set()
        for index, raw in enumerate(raw_entries):
            entry = _parse_entry(raw, index, definitions, source)
            if entry.id in seen:
                raise RegistryFormatError(f"{source}: duplicate id {entry.id!r}")
            seen.add(entry.id)
            entries.append(entry)
        return cls(entries, definitions, source)

    # lookup

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self):
        return iter(self._entries)

    def __contains__(self, ident: object) -> bool:
        return ident in self._by_id

    def ids(self) -> list[str]:
        return [entry.id for entry in self._entries]

    def groups(self) -> list[str]:
        present = {entry.group for entry in self._entries}
        return [group for group in GROUPS if group in present]

    def get(self, ident: str) -> IdentityEntry:
        try:
            return self._by_id[ident]
        except KeyError:
            raise UnknownId(ident, get_id_suggestions(ident, self.ids())) from None

    def entries(self, group: str | None = None) -> list[IdentityEntry]:
        """Entries in catalog order, optionally restricted to one group."""
        if group is None or group == "all":
            return list(self._entries)
        if group not in GROUPS:
            raise UnknownGroup(group, get_group_suggestions(group, list(GROUPS)))
        return [entry for entry in self._entries if entry.group == group]

    # verification

    def verify(
        self,
        ident: str,
        order: int | None = None,
        cross_check: bool = True,
        retries: int = 3,
    ) -> EntryResult:
        """
        Verify one entry below ``q^(order/5)``.

        Orders below the entry's ``min_order`` are raised to it and a
        warning is logged; ``EntryResult.order`` is the order actually used.
        """
        entry = self.get(ident)
        if order is not None and order < entry.min_order:
            log.warning(
                "%s: order %d is below its minimum, verifying at %d instead",
                entry.id,
                order,
                entry.min_order,
            )
        return self._verify_entry(entry, order, cross_check, retries)

    def verify_all(
        self,
        order: int | None = None,
        group: str | None = None,
        jobs: int = 1,
        cross_check: bool = True,
        retries: int = 3,
    ) -> list[EntryResult]:
        """
        Verify every entry (of one group). Results come back in catalog order
        whatever the number of worker threads.
        """
        selected = self.entries(group)
        if not selected:
            return []
        raised = [e.id for e in selected if order is not None and order < e.min_order]
        if raised:
            log.warning(
                "order %d is below the minimum of %d entries, which run at their "
                "own minimum: %s",
                order,
                len(raised),
                ", ".join(raised),
            )

        def run(entry: IdentityEntry) -> EntryResult:
            try:
                return self._verify_entry(entry, order, cross_check, retries)
            except QrrError as exc:
                log.debug("%s failed: %s", entry.id, exc)
                return EntryResult(
                    entry.id,
                    entry.group,
                    _effective_order(entry, order),
                    0.0,
                    error=str(exc),
                )

        started = time.perf_counter()
        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(run, selected))
        else:
            results = [run(entry) for entry in selected]

        passed = sum(result.ok for result in results)
        log.info(
            "verified %d/%d entries in %.2fs",
            passed,
            len(results),
            time.perf_counter() - started,
        )
        return results

    def _verify_entry(
        self,
        entry: IdentityEntry,
        order: int | None,
        cross_check: bool,
        retries: int,
    ) -> EntryResult:
        effective = _effective_order(entry, order)
        started = time.perf_counter()
        outcome = verify(entry.lhs, entry.rhs, effective, cross_check, retries)
        if not entry.balanced and not outcome.ok and outcome.note is None:
            left, right = entry.prefix_balance
            outcome = VerifyOutcome(
                outcome.status,
                outcome.checked_to,
                outcome.first_exponent,
                outcome.first_coefficient,
                f"prefix classes differ: {sorted(left)} vs {sorted(right)}",
            )
        elapsed = time.perf_counter() - started
        log.debug("%s: %s in %.3fs", entry.id, outcome.status.value, elapsed)
        return EntryResult(entry.id, entry.group, effective, elapsed, outcome)


def _effective_order(entry: IdentityEntry, order: int | None) -> int:
    if order is None:
        return entry.min_order
    return max(order, entry.min_order)


def _resolve_path(path: str | Path | None) -> Path | None:
    if path is not None:
        return Path(path).expanduser()
    env = os.environ.get(REGISTRY_ENV)
    if env:
        return Path(env).expanduser()
    configured = get_config_value("registry.path")
    if configured:
        return Path(str(configured)).expanduser()
    return None


def _parse_definitions(raw: Any, source: str) -> dict[str, Expr]:
    if not isinstance(raw, dict):
        raise RegistryFormatError(f"{source}: 'definitions' must be a mapping")
    parsed: dict[str, Expr] = {}
    # later definitions may refer to earlier ones
    for name, text in raw.items():
        try:
            parsed[str(name)] = parse(str(text), parsed)
        except ExprError as exc:
            raise RegistryFormatError(
                f"{source}: definition {name}: {exc}"
            ) from exc
    return parsed


def _parse_entry(
    raw: Any, index: int, definitions: Mapping[str, Expr], source: str
) -> IdentityEntry:
    if not isinstance(raw, dict):
        raise RegistryFormatError(f"{source}: entry #{index} is not a mapping")
    missing = [key for key in _REQUIRED if key not in raw]
    if missing:
        label = raw.get("id", f"#{index}")
        raise RegistryFormatError(
            f"{source}: entry {label} is missing {', '.join(missing)}"
        )

    ident = str(raw["id"])
    group = str(raw["group"])
    if group not in GROUPS:
        raise RegistryFormatError(
            f"{source}: entry {ident} has unknown group {group!r}"
        )

    lhs_text = " ".join(str(raw["lhs"]).split())
    rhs_text = " ".join(str(raw["rhs"]).split())
    try:
        lhs = parse(lhs_text, definitions)
        rhs = parse(rhs_text, definitions)
    except ExprError as exc:
        raise RegistryFormatError(f"{source}: entry {ident}: {exc}") from exc

    min_order = raw.get("min_order", GROUP_MIN_ORDER.get(group, DEFAULT_MIN_ORDER))
    if not isinstance(min_order, int) or min_order <= 0:
        raise RegistryFormatError(
            f"{source}: entry {ident}: min_order must be a positive integer"
        )

    display = raw.get("display")
    return IdentityEntry(
        id=ident,
        group=group,
        lhs=lhs,
        rhs=rhs,
        lhs_text=lhs_text,
        rhs_text=rhs_text,
        citation=" ".join(str(raw["citation"]).split()),
        min_order=min_order,
        display=" ".join(str(display).split()) if display else None,
    )


_LOADED: dict[Path | None, Registry] = {}


def load_registry(path: str | Path | None = None) -> Registry:
    """The registry ``Registry.load`` would pick, parsed once per resolved file."""
    resolved = _resolve_path(path)
    if resolved not in _LOADED:
        _LOADED[resolved] = Registry.load(resolved)
    return _LOADED[resolved]
