"""
Colored partition counts and the linear relations between them.

Two independent counters are provided: ``gf_count`` reads coefficients off
the product generating function, ``enum_count`` enumerates colored parts
directly and never touches the series code.
"""

from __future__ import annotations

import re
from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Any

import yaml

from .config import get_config_value
from .errors import CapExceeded, PartitionError, UnknownSpec, UnknownTheorem
from .log import get_logger
from .suggestions import closest_names
from .theta import Monomial, reciprocal_product

__all__ = [
    "PartSpec",
    "PartitionCatalog",
    "Relation",
    "TheoremReport",
    "TheoremRow",
    "enum_count",
    "gf_count",
    "load_partitions",
    "oracle_agreement",
    "verify_theorem",
]

log = get_logger(__name__)

_TERM = re.compile(r"^\s*([+-]?)\s*(\w+)\(n(?:\s*-\s*(\d+))?\)\s*$")
_GF_CHUNK = 64


@dataclass(frozen=True)
class PartSpec:
    """
    Partitions into parts from allowed residue classes, some colored.

    ``colors`` maps each allowed residue (in ``1..modulus-1``) to its color
    count.
    """

    name: str
    modulus: int
    colors: tuple[tuple[int, int], ...]

    @classmethod
    def from_classes(
        cls, name: str, modulus: int, classes: Mapping[str, int]
    ) -> PartSpec:
        """Build from ``{"±r": c, "r": c}`` class notation."""
        if modulus < 2:
            raise PartitionError(f"{name}: modulus must be at least 2")
        colors: dict[int, int] = {}
        for key, count in classes.items():
            text = str(key).strip()
            paired = text.startswith(("±", "+-"))
            digits = text.lstrip("±+-").strip()
            if not digits.isdigit():
                raise PartitionError(f"{name}: bad residue class {key!r}")
            r = int(digits)
            if not 0 < r < modulus:
                raise PartitionError(f"{name}: residue {r} outside 1..{modulus - 1}")
            if not isinstance(count, int) or count < 1:
                raise PartitionError(f"{name}: color count for {key!r} must be >= 1")
            residues = {r, modulus - r} if paired else {r}
            for residue in residues:
                if residue in colors:
                    raise PartitionError(f"{name}: residue {residue} listed twice")
                colors[residue] = count
        return cls(name, modulus, tuple(sorted(colors.items())))

    def parts(self, n: int) -> Iterator[tuple[int, int]]:
        """(part, colors) for every allowed part up to ``n``, ascending."""
        allowed = dict(self.colors)
        for part in range(1, n + 1):
            count = allowed.get(part % self.modulus)
            if count:
                yield part, count

    def factors(self) -> list[tuple[Monomial, Monomial, int]]:
        step = Monomial.q(self.modulus)
        return [(Monomial.q(r), step, c) for r, c in self.colors]

    def describe(self) -> str:
        seen: set[int] = set()
        pieces = []
        for r, c in self.colors:
            if r in seen:
                continue
            mirror = self.modulus - r
            paired = mirror != r and dict(self.colors).get(mirror) == c
            seen.update({r, mirror} if paired else {r})
            label = f"±{r}" if paired else str(r)
            pieces.append(label if c == 1 else f"{label} ({c} colors)")
        return f"parts ≡ {', '.join(pieces)} (mod {self.modulus})"


@lru_cache(maxsize=64)
def _gf_coefficients(spec: PartSpec, bound: int) -> tuple[int, ...]:
    log.debug("expanding generating function of %s below q^%d", spec.name, bound)
    series = reciprocal_product(spec.factors(), bound)
    return tuple(series.coefficient(i) for i in range(bound))


def gf_count(spec: PartSpec, n: int) -> int:
    """Coefficient of q^n in the product generating function of ``spec``."""
    if n < 0:
        return 0
    bound = (n // _GF_CHUNK + 1) * _GF_CHUNK
    return _gf_coefficients(spec, bound)[n]


def _oracle_cap(cap: int | None) -> int:
    if cap is not None:
        return cap
    return int(get_config_value("partitions.oracle_cap", 60))


def enum_count(spec: PartSpec, n: int, cap: int | None = None) -> int:
    """
    Count colored partitions of ``n`` by direct enumeration.

    Each colored part is its own kind; a partition picks a multiplicity for
    every kind, walking the kinds in order.

    Raises:
        CapExceeded: n is above the oracle cap
    """
    limit = _oracle_cap(cap)
    if n > limit:
        raise CapExceeded(n, limit)
    if n < 0:
        return 0
    kinds = [part for part, count in spec.parts(n) for _ in range(count)]

    @lru_cache(maxsize=None)
    def count(remaining: int, index: int) -> int:
        if remaining == 0:
            return 1
        if index == len(kinds):
            return 0
        part = kinds[index]
        return sum(
            count(remaining - used, index + 1)
            for used in range(0, remaining + 1, part)
        )

    return count(n, 0)


def oracle_agreement(
    specs: Mapping[str, PartSpec], up_to: int, cap: int | None = None
) -> list[tuple[str, int, int, int]]:
    """
    Compare both counters for every spec and ``n <= up_to``.

    Returns the disagreements as ``(name, n, gf, enum)``; empty means agreement.
    """
    mismatches = []
    for name, spec in specs.items():
        for n in range(up_to + 1):
            by_gf = gf_count(spec, n)
            by_enum = enum_count(spec, n, cap)
            if by_gf != by_enum:
                mismatches.append((name, n, by_gf, by_enum))
    if mismatches:
        log.warning("counters disagree in %d places", len(mismatches))
    return mismatches


@dataclass(frozen=True)
class Term:
    sign: int
    spec: str
    shift: int

    @classmethod
    def parse(cls, text: str) -> Term:
        match = _TERM.match(text)
        if not match:
            raise PartitionError(f"bad theorem term {text!r}, expected e.g. p1(n-2)")
        sign, name, shift = match.groups()
        return cls(-1 if sign == "-" else 1, name, int(shift or 0))

    def value(self, specs: Mapping[str, PartSpec], n: int) -> int:
        return self.sign * gf_count(specs[self.spec], n - self.shift)

    def __str__(self) -> str:
        index = f"n-{self.shift}" if self.shift else "n"
        return f"{'-' if self.sign < 0 else ''}{self.spec}({index})"


def _side(terms: tuple[Term, ...]) -> str:
    text = " + ".join(str(term) for term in terms)
    return text.replace("+ -", "- ")


@dataclass(frozen=True)
class Relation:
    """``sum(lhs) == sum(rhs)`` for all ``n >= from_n``."""

    id: str
    lhs: tuple[Term, ...]
    rhs: tuple[Term, ...]
    from_n: int
    citation: str = ""

    def statement(self) -> str:
        return f"{_side(self.lhs)} = {_side(self.rhs)} for n >= {self.from_n}"


@dataclass(frozen=True)
class TheoremRow:
    n: int
    lhs: int
    rhs: int
    judged: bool

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


@dataclass
class TheoremReport:
    theorem: str
    statement: str
    max_n: int
    rows: list[TheoremRow] = field(default_factory=list)
    oracle_checked_to: int | None = None
    oracle_mismatches: list[tuple[str, int, int, int]] = field(default_factory=list)

    @property
    def failures(self) -> list[TheoremRow]:
        return [row for row in self.rows if row.judged and not row.holds]

    @property
    def passed(self) -> int:
        return sum(1 for row in self.rows if row.judged and row.holds)

    @property
    def ok(self) -> bool:
        return not self.failures and not self.oracle_mismatches

    def to_dict(self) -> dict[str, Any]:
        return {
            "theorem": self.theorem,
            "statement": self.statement,
            "max_n": self.max_n,
            "passed": self.passed,
            "failed": [row.n for row in self.failures],
            "unjudged": [
                {"n": row.n, "lhs": row.lhs, "rhs": row.rhs, "holds": row.holds}
                for row in self.rows
                if not row.judged
            ],
            "oracle_checked_to": self.oracle_checked_to,
            "oracle_mismatches": [list(m) for m in self.oracle_mismatches],
        }


class PartitionCatalog:
    """The partition specs and theorems of one data file."""

    def __init__(
        self, specs: dict[str, PartSpec], theorems: dict[str, Relation]
    ) -> None:
        self.specs = specs
        self.theorems = theorems

    @classmethod
    def from_data(cls, data: Mapping[str, Any]) -> PartitionCatalog:
        specs = {}
        for name, raw in (data.get("specs") or {}).items():
            try:
                specs[str(name)] = PartSpec.from_classes(
                    str(name), int(raw["modulus"]), raw["classes"]
                )
            except (KeyError, TypeError) as exc:
                raise PartitionError(f"spec {name}: needs modulus and classes") from exc

        theorems = {}
        for ident, raw in (data.get("theorems") or {}).items():
            relation = Relation(
                id=str(ident),
                lhs=tuple(Term.parse(t) for t in raw.get("lhs", [])),
                rhs=tuple(Term.parse(t) for t in raw.get("rhs", [])),
                from_n=int(raw.get("from_n", 0)),
                citation=str(raw.get("citation", "")),
            )
            for term in relation.lhs + relation.rhs:
                if term.spec not in specs:
                    raise UnknownSpec(
                        f"theorem {ident} uses undefined partition "
                        f"function {term.spec}"
                    )
            theorems[relation.id] = relation
        return cls(specs, theorems)

    def spec(self, name: str) -> PartSpec:
        try:
            return self.specs[name]
        except KeyError:
            raise UnknownSpec(f"no partition function named {name!r}") from None

    def theorem(self, ident: str) -> Relation:
        try:
            return self.theorems[ident]
        except KeyError:
            raise UnknownTheorem(
                ident, closest_names(ident, list(self.theorems), 3, 0.3)
            ) from None

    def verify_theorem(
        self,
        ident: str,
        max_n: int | None = None,
        cross_check: int | None = None,
        cap: int | None = None,
    ) -> TheoremReport:
        """
        Check a relation for ``n`` up to ``max_n``.

        Rows below the relation's threshold are computed and reported but
        not judged. With ``cross_check`` the two counters are also compared
        for every spec the relation uses, up to that n.
        """
        relation = self.theorem(ident)
        if max_n is None:
            max_n = int(get_config_value("partitions.max_n", 100))
        if max_n < relation.from_n:
            raise PartitionError(
                f"theorem {ident} holds from n={relation.from_n}, "
                f"so max_n={max_n} checks nothing"
            )

        report = TheoremReport(relation.id, relation.statement(), max_n)
        for n in range(max_n + 1):
            lhs = sum(term.value(self.specs, n) for term in relation.lhs)
            rhs = sum(term.value(self.specs, n) for term in relation.rhs)
            report.rows.append(TheoremRow(n, lhs, rhs, n >= relation.from_n))

        if cross_check is not None:
            used = {t.spec: self.specs[t.spec] for t in relation.lhs + relation.rhs}
            report.oracle_checked_to = cross_check
            report.oracle_mismatches = oracle_agreement(used, cross_check, cap)

        log.info(
            "theorem %s: %d passed, %d failed up to n=%d",
            relation.id,
            report.passed,
            len(report.failures),
            max_n,
        )
        return report


@lru_cache(maxsize=1)
def load_partitions() -> PartitionCatalog:
    """The packaged partition catalog."""
    text = (
        resources.files("qrr")
        .joinpath("data", "partitions.yaml")
        .read_text(encoding="utf-8")
    )
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise PartitionError(f"partitions.yaml is not valid YAML ({exc})") from exc
    return PartitionCatalog.from_data(data)


def verify_theorem(
    ident: str,
    max_n: int | None = None,
    cross_check: int | None = None,
    cap: int | None = None,
) -> TheoremReport:
    """Module-level shortcut over the packaged catalog."""
    return load_partitions().verify_theorem(ident, max_n, cross_check, cap)
