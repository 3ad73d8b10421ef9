from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qrr.errors import CapExceeded, PartitionError, UnknownSpec, UnknownTheorem
from qrr.partitions import (
    PartitionCatalog,
    PartSpec,
    Term,
    enum_count,
    gf_count,
    oracle_agreement,
    verify_theorem,
)


class TestPartSpec:
    def test_paired_classes(self):
        spec = PartSpec.from_classes("x", 5, {"±1": 1, "2": 3})
        assert spec.colors == ((1, 1), (2, 3), (4, 1))
        assert spec.describe() == "parts ≡ ±1, 2 (3 colors) (mod 5)"

    def test_parts_up_to_n(self):
        spec = PartSpec.from_classes("x", 5, {"±1": 1, "2": 3})
        assert list(spec.parts(7)) == [(1, 1), (2, 3), (4, 1), (6, 1), (7, 3)]

    @pytest.mark.parametrize(
        ("modulus", "classes", "message"),
        [
            (1, {"1": 1}, "modulus"),
            (30, {"±0": 1}, "outside"),
            (30, {"±31": 1}, "outside"),
            (30, {"one": 1}, "bad residue"),
            (30, {"±1": 0}, "color count"),
            (30, {"±1": 1, "29": 2}, "listed twice"),
        ],
    )
    def test_rejected_classes(self, modulus, classes, message):
        with pytest.raises(PartitionError, match=message):
            PartSpec.from_classes("x", modulus, classes)


class TestCounters:
    def test_hand_counted_values(self, catalog):
        p4, p5, p6 = (catalog.spec(name) for name in ("p4", "p5", "p6"))
        assert [gf_count(p4, 2), gf_count(p5, 0), gf_count(p6, 2)] == [2, 1, 1]
        # 2+2 in two colors gives three multisets
        assert [gf_count(p4, 4), gf_count(p5, 2), gf_count(p6, 4)] == [3, 1, 2]

    def test_negative_argument_counts_nothing(self, catalog):
        spec = catalog.spec("p1")
        assert gf_count(spec, -1) == 0
        assert enum_count(spec, -3) == 0

    def test_single_class(self):
        # 20 = 3+17 = 10+10
        spec = PartSpec.from_classes("x", 7, {"3": 1})
        assert gf_count(spec, 20) == 2
        assert enum_count(spec, 20) == 2

    def test_counters_agree_on_every_catalog_spec(self, catalog):
        assert oracle_agreement(catalog.specs, 60) == []

    def test_enumeration_is_capped(self, catalog):
        with pytest.raises(CapExceeded) as info:
            enum_count(catalog.spec("p1"), 61)
        assert info.value.cap == 60

    def test_explicit_cap(self, catalog):
        assert enum_count(catalog.spec("p3"), 70, cap=80) == gf_count(
            catalog.spec("p3"), 70
        )

    @settings(max_examples=40, deadline=None)
    @given(
        st.integers(min_value=2, max_value=12),
        st.data(),
    )
    def test_counters_agree_on_random_specs(self, modulus, data):
        residues = data.draw(
            st.sets(st.integers(min_value=1, max_value=modulus - 1), min_size=1)
        )
        classes = {
            str(r): data.draw(st.integers(min_value=1, max_value=3)) for r in residues
        }
        spec = PartSpec.from_classes("random", modulus, classes)
        n = data.draw(st.integers(min_value=0, max_value=30))
        assert gf_count(spec, n) == enum_count(spec, n)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(min_value=2, max_value=12), st.data())
    def test_more_residues_or_colors_never_count_less(self, modulus, data):
        residue = st.integers(min_value=1, max_value=modulus - 1)
        colors = data.draw(
            st.dictionaries(residue, st.integers(min_value=1, max_value=3), min_size=1)
        )
        grown = dict(colors)
        extra = data.draw(residue)
        grown[extra] = grown.get(extra, 0) + 1
        small = PartSpec("small", modulus, tuple(sorted(colors.items())))
        large = PartSpec("large", modulus, tuple(sorted(grown.items())))
        for n in range(100):
            assert gf_count(large, n) >= gf_count(small, n), n

    @given(st.sampled_from(["p1", "p3", "p5", "p8", "p9"]), st.integers(0, 150))
    def test_counts_grow_when_ones_are_allowed(self, catalog, name, n):
        spec = catalog.spec(name)
        assert gf_count(spec, n + 1) >= gf_count(spec, n)


class TestTheorems:
    @pytest.mark.parametrize("ident", ["7.1", "7.2", "7.3"])
    def test_relation_holds_to_100(self, ident):
        report = verify_theorem(ident, max_n=100)
        assert report.ok
        assert report.failures == []

    def test_passed_counts_start_at_threshold(self):
        assert verify_theorem("7.1", max_n=100).passed == 100
        assert verify_theorem("7.3", max_n=100).passed == 99

    def test_small_cases(self):
        rows = verify_theorem("7.2", max_n=4).rows
        assert (rows[2].lhs, rows[2].rhs) == (1, 1)
        assert (rows[4].lhs, rows[4].rhs) == (2, 2)

    def test_rows_below_threshold_are_unjudged(self):
        report = verify_theorem("7.2", max_n=10)
        assert [row.n for row in report.rows if not row.judged] == [0, 1]
        assert [entry["n"] for entry in report.to_dict()["unjudged"]] == [0, 1]

    def test_statement(self, catalog):
        assert (
            catalog.theorem("7.1").statement()
            == "p1(n) - p2(n) = p3(n-1) for n >= 1"
        )

    def test_cross_check(self):
        report = verify_theorem("7.1", max_n=40, cross_check=40)
        assert report.oracle_checked_to == 40
        assert report.oracle_mismatches == []
        assert report.to_dict()["oracle_checked_to"] == 40

    def test_cross_check_past_cap(self):
        with pytest.raises(CapExceeded):
            verify_theorem("7.1", max_n=10, cross_check=61)

    def test_max_n_below_threshold(self):
        with pytest.raises(PartitionError, match="checks nothing"):
            verify_theorem("7.2", max_n=1)

    def test_unknown_theorem(self):
        with pytest.raises(UnknownTheorem) as info:
            verify_theorem("7.4")
        assert "7.1" in info.value.suggestions

    def test_default_max_n_comes_from_config(self, tmp_path, monkeypatch):
        path = tmp_path / "config.yaml"
        path.write_text("partitions:\n  max_n: 12\n", encoding="utf-8")
        monkeypatch.setenv("QRR_CONFIG", str(path))
        assert verify_theorem("7.1").max_n == 12


class TestCatalogData:
    def test_undefined_spec(self):
        data = {
            "specs": {"a": {"modulus": 5, "classes": {"±1": 1}}},
            "theorems": {"x": {"lhs": ["a(n)"], "rhs": ["b(n-1)"]}},
        }
        with pytest.raises(UnknownSpec, match="undefined partition function b"):
            PartitionCatalog.from_data(data)

    def test_spec_without_classes(self):
        with pytest.raises(PartitionError, match="needs modulus and classes"):
            PartitionCatalog.from_data({"specs": {"a": {"modulus": 5}}})

    def test_lookup_of_missing_spec(self, catalog):
        with pytest.raises(UnknownSpec):
            catalog.spec("p11")

    @pytest.mark.parametrize("text", ["p1", "p1(m)", "p1(n+2)", "* p1(n)"])
    def test_bad_terms(self, text):
        with pytest.raises(PartitionError):
            Term.parse(text)

    def test_term_text(self):
        assert str(Term.parse("- p5(n - 2)")) == "-p5(n-2)"
