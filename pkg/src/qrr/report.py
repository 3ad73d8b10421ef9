"""
Machine-readable command results.

A ``Report`` is what every command produces; the formatters only render
it. ``to_dict`` output follows ``docs/report-schema.json`` and
``from_dict`` reads it back.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from . import __version__
from .partitions import TheoremReport
from .registry import EntryResult
from .series import LaurentSeries, Status, VerifyOutcome

__all__ = ["SCHEMA", "CheckItem", "Report", "Term"]

SCHEMA = "qrr.report/1"

_FAILING = frozenset({Status.NONZERO.value, "ERROR", "FAIL"})


def _fraction_text(value: Fraction | None) -> str | None:
    return None if value is None else str(value)


def _fraction(value: Any) -> Fraction | None:
    return None if value is None else Fraction(str(value))


@dataclass(frozen=True)
class Term:
    """One coefficient of an expanded series."""

    exponent: Fraction
    coefficient: int

    def to_dict(self) -> dict[str, str]:
        # decimal strings keep big coefficients exact in JSON
        return {"exponent": str(self.exponent), "coefficient": str(self.coefficient)}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Term:
        return cls(Fraction(str(data["exponent"])), int(data["coefficient"]))


@dataclass(frozen=True)
class CheckItem:
    """One checked identity, or one judged partition relation."""

    id: str
    status: str
    checked_to: Fraction | None = None
    first_exponent: Fraction | None = None
    first_coefficient: int | None = None
    note: str | None = None
    error: str | None = None
    group: str | None = None
    order: int | None = None
    seconds: float | None = None

    @property
    def ok(self) -> bool:
        return self.status not in _FAILING

    @classmethod
    def from_outcome(
        cls, ident: str, outcome: VerifyOutcome, order: int | None = None
    ) -> CheckItem:
        return cls(
            id=ident,
            status=outcome.status.value,
            checked_to=outcome.checked_to,
            first_exponent=outcome.first_exponent,
            first_coefficient=outcome.first_coefficient,
            note=outcome.note,
            order=order,
        )

    @classmethod
    def from_entry_result(cls, result: EntryResult) -> CheckItem:
        outcome = result.outcome
        return cls(
            id=result.id,
            status=result.status,
            checked_to=outcome.checked_to if outcome else None,
            first_exponent=outcome.first_exponent if outcome else None,
            first_coefficient=outcome.first_coefficient if outcome else None,
            note=outcome.note if outcome else None,
            error=result.error,
            group=result.group,
            order=result.order,
            seconds=round(result.seconds, 4),
        )

    def describe(self) -> str:
        if self.error:
            return f"ERROR: {self.error}"
        if self.status == Status.NONZERO.value:
            text = (
                f"NONZERO: coefficient {self.first_coefficient} "
                f"at q^{self.first_exponent}"
            )
            return f"{text} ({self.note})" if self.note else text
        if self.checked_to is not None:
            return f"{self.status} (checked below q^{self.checked_to})"
        return self.status

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "id": self.id,
            "status": self.status,
            "checked_to": _fraction_text(self.checked_to),
            "first_exponent": _fraction_text(self.first_exponent),
            "first_coefficient": (
                None if self.first_coefficient is None else str(self.first_coefficient)
            ),
        }
        for key in ("note", "error", "group", "order", "seconds"):
            value = getattr(self, key)
            if value is not None:
                data[key] = value
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> CheckItem:
        coefficient = data.get("first_coefficient")
        return cls(
            id=data["id"],
            status=data["status"],
            checked_to=_fraction(data.get("checked_to")),
            first_exponent=_fraction(data.get("first_exponent")),
            first_coefficient=None if coefficient is None else int(coefficient),
            note=data.get("note"),
            error=data.get("error"),
            group=data.get("group"),
            order=data.get("order"),
            seconds=data.get("seconds"),
        )


@dataclass
class Report:
    """
    Result of one CLI command.

    ``kind`` is one of ``series``, ``verify``, ``partitions`` or ``list``.
    Series reports carry ``terms``; the others carry ``items``.
    """

    command: str
    kind: str
    order: int | None = None
    precision: Fraction | None = None
    terms: list[Term] = field(default_factory=list)
    items: list[CheckItem] = field(default_factory=list)
    theorems: list[dict[str, Any]] = field(default_factory=list)
    seconds: float = 0.0
    version: str = __version__

    @property
    def ok(self) -> bool:
        return all(item.ok for item in self.items)

    @property
    def failures(self) -> list[CheckItem]:
        return [item for item in self.items if not item.ok]

    @classmethod
    def for_series(cls, command: str, series: LaurentSeries, order: int) -> Report:
        terms = [Term(exponent, c) for exponent, c in series.terms()]
        return cls(command, "series", order, series.precision, terms)

    def add_theorem(self, theorem: TheoremReport) -> None:
        self.theorems.append(theorem.to_dict())
        note = f"{theorem.statement}: {theorem.passed} values up to n={theorem.max_n}"
        if theorem.failures:
            note += f", fails at n={', '.join(str(r.n) for r in theorem.failures[:5])}"
        if theorem.oracle_checked_to is not None:
            agree = "disagree" if theorem.oracle_mismatches else "agree"
            note += f"; counters {agree} up to n={theorem.oracle_checked_to}"
        self.items.append(
            CheckItem(
                id=f"theorem {theorem.theorem}",
                status="PASS" if theorem.ok else "FAIL",
                note=note,
            )
        )

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "schema": SCHEMA,
            "version": self.version,
            "command": self.command,
            "kind": self.kind,
            "ok": self.ok,
            "order": self.order,
            "seconds": round(self.seconds, 4),
        }
        if self.kind == "series":
            data["precision"] = _fraction_text(self.precision)
            data["terms"] = [term.to_dict() for term in self.terms]
        else:
            data["items"] = [item.to_dict() for item in self.items]
        if self.theorems:
            data["theorems"] = self.theorems
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Report:
        if data.get("schema") != SCHEMA:
            raise ValueError(f"unsupported report schema: {data.get('schema')!r}")
        return cls(
            command=data["command"],
            kind=data["kind"],
            order=data.get("order"),
            precision=_fraction(data.get("precision")),
            terms=[Term.from_dict(t) for t in data.get("terms", [])],
            items=[CheckItem.from_dict(i) for i in data.get("items", [])],
            theorems=list(data.get("theorems", [])),
            seconds=float(data.get("seconds", 0.0)),
            version=data.get("version", __version__),
        )
