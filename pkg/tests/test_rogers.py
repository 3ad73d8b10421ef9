from __future__ import annotations

from fractions import Fraction

import pytest

from qrr.errors import FractionalExponent
from qrr.rogers import (
    R,
    PrefixedSeries,
    cf_convergent,
    default_depth,
    g_product,
    g_sum,
    h_product,
    h_sum,
    rr_function,
    twisted,
)
from qrr.series import LaurentSeries, Status

T_HEAD = [1, -1, 1, 0, -1, 1, -1, 1, 0, -1]


def test_g_sum_equals_product():
    assert g_sum(60) == g_product(60)


def test_h_sum_equals_product():
    assert h_sum(60) == h_product(60)


def test_g_minus_h_is_not_zero():
    outcome = (g_sum(30) - h_sum(30)).is_zero()
    assert outcome.status is Status.NONZERO
    assert outcome.first_exponent == 1
    assert outcome.first_coefficient == 1


def test_quotient_head():
    t = rr_function("T", 1, 1, 10)
    assert [t.coefficient(i) for i in range(10)] == T_HEAD


def test_substituted_argument():
    t2 = rr_function("T", 1, 2, 20)
    assert [t2.coefficient(2 * i) for i in range(10)] == T_HEAD
    assert all(t2.coefficient(2 * i + 1) == 0 for i in range(10))


def test_negative_argument_flips_odd_coefficients():
    t = rr_function("T", -1, 1, 10)
    assert [t.coefficient(i) for i in range(10)] == [
        c if i % 2 == 0 else -c for i, c in enumerate(T_HEAD)
    ]


def test_r_carries_a_fifth_prefix():
    r = R(1, 50)
    assert r.prefix == 1
    assert not r.lifted
    assert r.q_order() == Fraction(1, 5)
    assert r.bound_fifths >= 50


def test_r_at_fifth_power_has_integral_prefix():
    r5 = R(5, 50)
    assert r5.prefix == 0
    assert r5.q_order() == 1


def test_fifth_power_of_r_returns_to_integral_lattice():
    power = R(1, 100) ** 5
    assert power.prefix == 0
    assert not power.lifted
    assert power.q_order() == 1


def test_mismatched_prefixes_lift_to_fifth_lattice():
    total = R(1, 50) + R(2, 50)
    assert total.lifted
    assert total.body.denom == 5
    assert total.leading_fifths() == 1


def test_matching_prefixes_stay_split():
    product = R(1, 50) * R(2, 50)
    assert product.prefix == 3
    assert not product.lifted


def test_r_cannot_take_negative_argument():
    with pytest.raises(FractionalExponent):
        R(1, 50).negate_q()


def test_to_laurent_agrees_with_prefix_form():
    r = R(1, 30)
    laurent = r.to_laurent()
    assert laurent.denom == 5
    assert laurent.coefficient(1) == 1
    assert laurent.coefficient(6) == -1


def test_plain_series_round_trip():
    body = LaurentSeries.build(0, [1, 2, 3], 3)
    assert PrefixedSeries.plain(body).to_laurent().restrict(1) == body


def test_q_power_of_fractional_exponent():
    qp = PrefixedSeries.q_power(7, 20)
    assert list(qp.to_laurent().terms()) == [(Fraction(7, 5), 1)]


@pytest.mark.parametrize("depth", range(7))
def test_convergent_first_differs_at_triangular_exponent(depth):
    bound = 5 * ((depth + 1) * (depth + 2) // 2 + 2)
    diff = cf_convergent(depth, bound) - R(1, bound)
    expected = Fraction((depth + 1) * (depth + 2), 2) + Fraction(1, 5)
    assert diff.is_zero(bound).first_exponent == expected


def test_convergents_approach_r_monotonically():
    bound = 500
    r = R(1, bound)
    orders = [
        (cf_convergent(depth, bound) - r).is_zero(bound).first_exponent
        for depth in range(13)
    ]
    assert all(a < b for a, b in zip(orders, orders[1:], strict=False))


def test_default_depth_is_deep_enough():
    bound = 100
    diff = cf_convergent(default_depth(bound), bound) - R(1, bound)
    assert diff.is_zero(bound).ok


@pytest.mark.parametrize("name", ["G", "H", "T"])
def test_twisted_agrees_with_quotient_formula(name):
    # cross_check raises ConsistencyError if q -> -q and the quotient differ
    series = twisted(name, 60)
    assert series == twisted(name, 60, cross_check=False)
    assert series == rr_function(name, -1, 1, 60)


def test_twisted_g_head():
    # G(-q) = 1 - q + q^2 - q^3 + 2q^4 - 2q^5 + 3q^6
    g = twisted("G", 7)
    assert [g.coefficient(i) for i in range(7)] == [1, -1, 1, -1, 2, -2, 3]


def test_twisted_rejects_other_names():
    with pytest.raises(ValueError):
        twisted("R", 10)
