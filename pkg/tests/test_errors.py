from __future__ import annotations

import pytest

from qrr.errors import (
    CapExceeded,
    ExprSyntaxError,
    FractionalExponent,
    NonUnitLeading,
    QrrError,
    UnknownAtom,
    UnknownGroup,
    UnknownId,
    UnknownTheorem,
    to_smart_error,
)


def test_context_is_reported_innermost_first():
    exc = QrrError("boom")
    exc.add_context("G(q)-G(q)")
    exc.add_context("1/(G(q)-G(q))")
    assert str(exc) == "boom (in G(q)-G(q))"
    assert exc.path == ["G(q)-G(q)", "1/(G(q)-G(q))"]


def test_syntax_error_points_at_the_position():
    smart = to_smart_error(ExprSyntaxError("expected ')'", "G(q", 3))
    assert smart.detail == "  G(q\n     ^"


@pytest.mark.parametrize(
    ("exc", "expected"),
    [
        (UnknownAtom("phy", ["phi"]), ["phi(...)"]),
        (UnknownId("t1-11", ["t1-1"]), ["qrr verify t1-1"]),
        (UnknownGroup("lemmas", ["lemma"]), ["lemma"]),
        (UnknownTheorem("7.4", ["7.1"]), ["7.1"]),
    ],
)
def test_lookup_errors_carry_suggestions(exc, expected):
    assert to_smart_error(exc).suggestions == expected


def test_cap_hint_names_the_cap():
    assert "--cross-check 60" in to_smart_error(CapExceeded(61, 60)).fix


def test_kernel_errors_get_a_fix():
    assert "denominator" in to_smart_error(NonUnitLeading(2)).fix
    assert to_smart_error(FractionalExponent("odd")).fix


def test_kernel_error_detail_lists_the_path():
    exc = FractionalExponent("needs a root")
    exc.add_context("R(-q)")
    assert to_smart_error(exc).detail == "  in R(-q)"


def test_display_writes_to_stderr(capsys):
    to_smart_error(UnknownId("t1-11", ["t1-1"])).display()
    err = capsys.readouterr().err
    assert "Did you mean" in err
    assert "qrr verify t1-1" in err
