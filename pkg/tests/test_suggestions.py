from __future__ import annotations

import pytest

from qrr import suggestions
from qrr.suggestions import (
    closest_names,
    get_atom_suggestions,
    get_group_suggestions,
    get_id_suggestions,
)


def test_best_match_first():
    assert closest_names("psy", ["phi", "psi", "chi"], max_suggestions=1) == ["psi"]


def test_original_case_is_kept():
    assert closest_names("g", ["G", "H"], cutoff=0.9) == ["G"]


@pytest.mark.parametrize("name", ["", "   "])
def test_empty_query(name):
    assert closest_names(name, ["t1-1"]) == []


def test_nothing_close():
    assert get_id_suggestions("zzzzzz", ["t1-1", "rrq5"]) == []


def test_helpers():
    assert get_id_suggestions("t1-11", ["t1-1", "s8-16", "euler"])[0] == "t1-1"
    assert get_group_suggestions("lemmas", ["main", "lemma"])[0] == "lemma"
    assert "chi" in get_atom_suggestions("chii", ["chi", "phi", "G"])


def test_difflib_fallback(monkeypatch):
    monkeypatch.setattr(suggestions, "THEFUZZ_AVAILABLE", False)
    assert closest_names("rrq55", ["t1-1", "t1-2", "rrq5"]) == ["rrq5"]
