from __future__ import annotations

import logging
from fractions import Fraction
from importlib import resources

import pytest

from qrr.errors import RegistryFormatError, UnknownGroup, UnknownId
from qrr.expr import evaluate
from qrr.registry import GROUPS, Registry, load_registry

ENTRY = """
version: 1
definitions:
  A: "G(q) - H(q)"
  B: "$A*G(q)"
identities:
  - id: rr
    group: main
    lhs: "G(q)*H(q)"
    rhs: "G(q)*H(q)"
    citation: test
  - id: uses-defs
    group: lemma
    lhs: "$B"
    rhs: "G(q)^2 - H(q)*G(q)"
    citation: test
"""


def registry_text(*entries: str) -> str:
    body = "\n".join(entries)
    return f"identities:\n{body}\n"


class TestLoading:
    def test_catalog_size(self, registry):
        assert len(registry) == 165

    def test_every_group_is_present(self, registry):
        assert registry.groups() == list(GROUPS)

    def test_ids_are_in_catalog_order(self, registry):
        ids = registry.ids()
        assert ids[:3] == ["rrq5", "t1-1", "t1-2"]
        assert len(set(ids)) == len(ids)

    def test_definitions_may_refer_to_earlier_ones(self):
        reg = Registry.from_text(ENTRY)
        assert reg.verify("uses-defs", order=50).ok

    def test_whitespace_in_expressions_is_folded(self):
        reg = Registry.from_text(
            registry_text(
                "  - id: x\n    group: main\n    lhs: >-\n      G(q)\n      *H(q)\n"
                "    rhs: G(q)*H(q)\n    citation: c"
            )
        )
        assert reg.get("x").lhs_text == "G(q) *H(q)"

    def test_env_variable_points_at_another_file(self, tmp_path, monkeypatch):
        path = tmp_path / "mine.yaml"
        path.write_text(ENTRY, encoding="utf-8")
        monkeypatch.setenv("QRR_REGISTRY", str(path))
        reg = Registry.load()
        assert reg.ids() == ["rr", "uses-defs"]
        assert reg.source == str(path)

    def test_explicit_path_wins_over_env(self, tmp_path, monkeypatch):
        path = tmp_path / "mine.yaml"
        path.write_text(ENTRY, encoding="utf-8")
        monkeypatch.setenv("QRR_REGISTRY", str(tmp_path / "missing.yaml"))
        assert len(load_registry(path)) == 2

    def test_missing_file(self, tmp_path):
        with pytest.raises(RegistryFormatError, match="cannot read registry"):
            Registry.load(tmp_path / "missing.yaml")


class TestFormatErrors:
    @pytest.mark.parametrize(
        ("text", "message"),
        [
            ("- just a list", "mapping at top level"),
            ("identities: {a: 1}", "must be a list"),
            ("identities: [:", "not valid YAML"),
            (
                registry_text("  - id: x\n    group: main\n    lhs: G(q)"),
                "missing rhs, citation",
            ),
            (
                registry_text(
                    "  - {id: x, group: nope, lhs: G(q), rhs: G(q), citation: c}"
                ),
                "unknown group",
            ),
            (
                registry_text(
                    "  - {id: x, group: main, lhs: G(q, rhs: G(q), citation: c}"
                ),
                "entry x",
            ),
            (
                registry_text(
                    "  - {id: x, group: main, lhs: G(q), rhs: G(q), citation: c}",
                    "  - {id: x, group: main, lhs: H(q), rhs: H(q), citation: c}",
                ),
                "duplicate id",
            ),
            (
                registry_text(
                    "  - {id: x, group: main, lhs: G(q), rhs: G(q), citation: c,"
                    " min_order: -4}"
                ),
                "min_order",
            ),
            ("definitions: {A: 'G(q'}\nidentities: []", "definition A"),
        ],
    )
    def test_rejected(self, text, message):
        with pytest.raises(RegistryFormatError, match=message):
            Registry.from_text(text)


class TestLookup:
    def test_unknown_id_suggests_near_misses(self, registry):
        with pytest.raises(UnknownId) as info:
            registry.get("t1-11")
        assert "t1-1" in info.value.suggestions

    def test_unknown_group_suggests(self, registry):
        with pytest.raises(UnknownGroup) as info:
            registry.entries("lemmas")
        assert info.value.suggestions[0] == "lemma"

    def test_all_means_every_group(self, registry):
        assert len(registry.entries("all")) == len(registry)

    def test_group_filter(self, registry):
        main = registry.entries("main")
        assert main
        assert {entry.group for entry in main} == {"main"}

    def test_describe_joins_both_sides(self, registry):
        entry = registry.get("t1-1")
        assert entry.describe() == f"{entry.lhs_text} = {entry.rhs_text}"

    def test_describe_prefers_display_text(self, registry):
        shown = [e for e in registry if e.display]
        assert shown
        assert all(e.describe() == e.display for e in shown)

    def test_concluding_entries_need_a_higher_order(self, registry):
        assert all(e.min_order == 600 for e in registry.entries("concluding"))
        assert registry.get("t1-1").min_order == 200


class TestVerification:
    def test_order_is_raised_to_the_entry_minimum(self, registry):
        result = registry.verify("t1-1", order=10)
        assert result.order == 200
        assert result.ok

    def test_raised_order_is_logged(self, registry, caplog, monkeypatch):
        monkeypatch.setattr(logging.getLogger("qrr"), "propagate", True)
        with caplog.at_level(logging.WARNING, logger="qrr"):
            registry.verify("t1-1", order=10)
            registry.verify_all(order=10, group="main")
        warnings = [r.getMessage() for r in caplog.records]
        assert (
            "t1-1: order 10 is below its minimum, verifying at 200 instead" in warnings
        )
        assert any("minimum of 9 entries" in text for text in warnings)

    def test_order_above_minimum_is_kept(self, registry):
        assert registry.verify("t1-1", order=300).order == 300

    def test_parallel_results_keep_catalog_order(self, registry):
        serial = registry.verify_all(group="main")
        parallel = registry.verify_all(group="main", jobs=2)
        assert [r.id for r in parallel] == [r.id for r in serial]
        assert [r.status for r in parallel] == [r.status for r in serial]

    def test_evaluation_errors_are_collected(self):
        reg = Registry.from_text(
            registry_text(
                "  - {id: bad, group: main, lhs: 'R(-q)', rhs: '1', citation: c}",
                "  - {id: good, group: main, lhs: G(q), rhs: G(q), citation: c}",
            )
        )
        results = reg.verify_all(order=20)
        assert [r.status for r in results] == ["ERROR", "ZERO"]
        assert "fifth root" in results[0].error
        assert not results[0].ok

    def test_unbalanced_failure_is_annotated(self):
        reg = Registry.from_text(
            registry_text(
                "  - {id: skew, group: main, lhs: 'R(q) + 1', rhs: '1',"
                " citation: c}"
            )
        )
        result = reg.verify("skew", order=20)
        assert result.status == "NONZERO"
        assert "prefix classes differ" in result.outcome.note

    def test_fifth_power_relation_needs_three_in_the_denominator(self, registry):
        entry = registry.get("rrq5")
        assert "1 + 3*R(q^5)" in entry.rhs_text
        assert registry.verify("rrq5", order=400).ok
        misprint = entry.rhs_text.replace("1 + 3*R(q^5)", "1 + R(q^5)")
        printed = {
            "id": "printed",
            "group": "main",
            "lhs": "R(q)^5",
            "rhs": misprint,
            "citation": "c",
        }
        reg = Registry.from_data({"identities": [printed]})
        outcome = reg.verify("printed", order=400).outcome
        assert (outcome.first_exponent, outcome.first_coefficient) == (2, -2)

    def test_false_identity_reports_first_term(self):
        reg = Registry.from_text(
            registry_text(
                "  - {id: gh, group: main, lhs: G(q), rhs: H(q), citation: c}"
            )
        )
        result = reg.verify("gh", order=50)
        assert result.outcome.first_exponent == 1
        assert result.outcome.first_coefficient == 1


def _packaged() -> Registry:
    text = resources.files("qrr").joinpath("data", "identities.yaml").read_text("utf-8")
    return Registry.from_text(text)


def _catalog_ids() -> list[str]:
    return _packaged().ids()


def _integral_ids(*groups: str) -> list[str]:
    return [
        entry.id
        for group in groups
        for entry in _packaged().entries(group)
        if entry.prefix_balance == (frozenset({0}), frozenset({0}))
    ]


@pytest.mark.parametrize("ident", _catalog_ids())
def test_catalog_entry_holds(registry, ident):
    result = registry.verify(ident)
    assert result.ok, f"{ident}: {result.outcome.describe()}"


@pytest.mark.parametrize("ident", _integral_ids("gh", "classical"))
def test_entry_survives_q_to_q_squared(registry, ident):
    entry = registry.get(ident)
    order = entry.min_order
    left = evaluate(entry.lhs, order).substitute_power(2)
    right = evaluate(entry.rhs, order).substitute_power(2)
    outcome = (left - right).is_zero(2 * order)
    assert outcome.ok, f"{ident}: {outcome.describe()}"
    assert outcome.checked_to == Fraction(2 * order, 5)


@pytest.mark.slow
@pytest.mark.parametrize("group", [g for g in GROUPS if g != "concluding"])
def test_group_holds_to_order_500(registry, group):
    results = registry.verify_all(order=500, group=group)
    assert [r.id for r in results if not r.ok] == []


@pytest.mark.slow
def test_doubling_the_order_changes_no_outcome(registry):
    low = registry.verify_all(order=500, jobs=4)
    high = registry.verify_all(order=1000, jobs=4)
    assert [(r.id, r.status) for r in high] == [(r.id, r.status) for r in low]
