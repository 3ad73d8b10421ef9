"""
Ramanujan's theta function and the q-products built from it.

Every atom has two independent constructions: the bilateral sum and the
Jacobi triple product (or a quotient of Euler products). When
``cross_check`` is on both are built and compared exactly.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import ConsistencyError, DenomMismatch, DivergentPair, SeriesError
from .log import get_logger
from .series import LaurentSeries, Status, VerifyOutcome, ceil_div

__all__ = [
    "Monomial",
    "ThetaPair",
    "chi",
    "euler",
    "phi",
    "pochhammer",
    "psi",
    "quintuple",
    "reciprocal_pochhammer",
    "reciprocal_product",
    "theta",
    "theta_product",
    "theta_sum",
]

log = get_logger(__name__)


@dataclass(frozen=True)
class Monomial:
    """``sign * q^exponent`` with ``sign`` in {+1, -1}."""

    sign: int
    exponent: Fraction

    @classmethod
    def q(cls, exponent: int | Fraction = 1, sign: int = 1) -> Monomial:
        return cls(sign, Fraction(exponent))

    def __mul__(self, other: Monomial) -> Monomial:
        return Monomial(self.sign * other.sign, self.exponent + other.exponent)

    def __truediv__(self, other: Monomial) -> Monomial:
        return Monomial(self.sign * other.sign, self.exponent - other.exponent)

    def __neg__(self) -> Monomial:
        return Monomial(-self.sign, self.exponent)

    def __pow__(self, n: int) -> Monomial:
        return Monomial(self.sign ** (n % 2), self.exponent * n)

    def index(self, denom: int) -> int:
        """Exponent as an index on the lattice ``1/denom``."""
        scaled = self.exponent * denom
        if scaled.denominator != 1:
            raise DenomMismatch(f"q^{self.exponent} is not on the lattice 1/{denom}")
        return scaled.numerator

    def __str__(self) -> str:
        body = "q" if self.exponent == 1 else f"q^{self.exponent}"
        return body if self.sign > 0 else f"-{body}"


@dataclass(frozen=True)
class ThetaPair:
    a: Monomial
    b: Monomial

    def __str__(self) -> str:
        return f"f({self.a}, {self.b})"


def _window(a: int, b: int, bound: int) -> range:
    """Indices n whose exponent a*n(n+1)/2 + b*n(n-1)/2 can lie below bound."""
    s = a + b
    disc = (a - b) ** 2 + 8 * s * bound
    if disc < 0:
        return range(0)
    root = math.isqrt(disc) + 1
    low = (-(a - b) - root) // (2 * s) - 1
    high = (-(a - b) + root) // (2 * s) + 1
    return range(low, high + 1)


def theta_sum(pair: ThetaPair, bound: int, denom: int = 1) -> LaurentSeries:
    """
    f(a, b) = sum over all integers n of a^(n(n+1)/2) b^(n(n-1)/2).

    Args:
        pair: the two theta arguments
        bound: exclusive index bound on the lattice ``1/denom``
        denom: lattice denominator

    Raises:
        DivergentPair: the quadratic exponent does not grow (|ab| >= 1).
        DenomMismatch: an argument exponent is off the lattice.
    """
    a = pair.a.index(denom)
    b = pair.b.index(denom)
    if a + b <= 0:
        raise DivergentPair(f"{pair} diverges: |ab| must be below 1")
    terms: dict[int, int] = {}
    for n in _window(a, b, bound):
        up = n * (n + 1) // 2
        down = n * (n - 1) // 2
        exponent = a * up + b * down
        if exponent >= bound:
            continue
        sign = (pair.a.sign ** (up % 2)) * (pair.b.sign ** (down % 2))
        terms[exponent] = terms.get(exponent, 0) + sign
    return LaurentSeries.from_terms(terms, bound, denom)


def _factor_exponents(start: int, step: int, bound: int) -> range:
    return range(start, bound, step) if step > 0 else range(0)


def _multiply_factors(
    dense: list[int], c: Monomial, base: Monomial, denom: int, bound: int
) -> None:
    """dense *= prod over k >= 0 of (1 - c * base^k), in place."""
    start = c.index(denom)
    step = base.index(denom)
    if step <= 0:
        raise DivergentPair(f"pochhammer base {base} must have a positive exponent")
    if start < 0:
        raise DivergentPair(f"pochhammer argument {c} has a negative exponent")
    for k, e in enumerate(_factor_exponents(start, step, bound)):
        sigma = c.sign * (base.sign ** (k % 2))
        if e == 0:
            factor = 1 - sigma
            for i in range(len(dense)):
                dense[i] *= factor
            continue
        for i in range(len(dense) - 1, e - 1, -1):
            dense[i] -= sigma * dense[i - e]


def pochhammer(
    c: Monomial, base: Monomial, bound: int, denom: int = 1
) -> LaurentSeries:
    """(c; base)_inf = prod over k >= 0 of (1 - c * base^k)."""
    dense = [1] + [0] * (bound - 1) if bound > 0 else []
    _multiply_factors(dense, c, base, denom, bound)
    return LaurentSeries.build(0, dense, bound, denom)


def reciprocal_product(
    factors: Sequence[tuple[Monomial, Monomial, int]],
    bound: int,
    denom: int = 1,
) -> LaurentSeries:
    """
    Product of 1 / (c; base)_inf^power over ``(c, base, power)`` triples.

    Each factor 1/(1 - sigma q^e) is a strided prefix sum over the dense
    coefficient list, so no series inversion is needed.
    """
    dense = [1] + [0] * (bound - 1) if bound > 0 else []
    for c, base, power in factors:
        start = c.index(denom)
        step = base.index(denom)
        if start <= 0 or step <= 0:
            raise DivergentPair(
                f"1/({c}; {base}) needs positive exponents on both arguments"
            )
        for k, e in enumerate(_factor_exponents(start, step, bound)):
            sigma = c.sign * (base.sign ** (k % 2))
            for _ in range(power):
                for i in range(e, len(dense)):
                    dense[i] += sigma * dense[i - e]
    return LaurentSeries.build(0, dense, bound, denom)


def reciprocal_pochhammer(
    c: Monomial, base: Monomial, bound: int, denom: int = 1, power: int = 1
) -> LaurentSeries:
    """1 / (c; base)_inf^power."""
    return reciprocal_product([(c, base, power)], bound, denom)


def theta_product(pair: ThetaPair, bound: int, denom: int = 1) -> LaurentSeries:
    """Jacobi triple product: (-a; ab)(-b; ab)(ab; ab)."""
    if pair.a.exponent < 0 or pair.b.exponent < 0:
        raise DivergentPair(
            f"product form of {pair} needs non-negative argument exponents"
        )
    ab = pair.a * pair.b
    if ab.exponent <= 0:
        raise DivergentPair(f"{pair} diverges: |ab| must be below 1")
    dense = [1] + [0] * (bound - 1) if bound > 0 else []
    _multiply_factors(dense, -pair.a, ab, denom, bound)
    _multiply_factors(dense, -pair.b, ab, denom, bound)
    _multiply_factors(dense, ab, ab, denom, bound)
    return LaurentSeries.build(0, dense, bound, denom)


def _agree(name: str, first: LaurentSeries, second: LaurentSeries) -> None:
    bound = min(first.bound, second.bound)
    diff = (first.truncate(bound) - second.truncate(bound)).is_zero()
    if diff.status is not Status.ZERO:
        raise ConsistencyError(
            f"{name}: sum and product forms disagree at q^{diff.first_exponent}"
        )


@lru_cache(maxsize=4096)
def theta(
    a: Monomial, b: Monomial, bound: int, denom: int = 1, cross_check: bool = True
) -> LaurentSeries:
    """f(a, b), optionally checked against the triple product."""
    pair = ThetaPair(a, b)
    log.debug("building %s below index %d on 1/%d", pair, bound, denom)
    series = theta_sum(pair, bound, denom)
    if cross_check and a.exponent >= 0 and b.exponent >= 0:
        _agree(str(pair), series, theta_product(pair, bound, denom))
    return series


@lru_cache(maxsize=1024)
def euler(
    x: Monomial, bound: int, denom: int = 1, cross_check: bool = True
) -> LaurentSeries:
    """f(-x) = f(-x, -x^2) = (x; x)_inf."""
    series = pochhammer(x, x, bound, denom)
    if cross_check:
        _agree(f"f(-{x})", series, theta_sum(ThetaPair(-x, -(x**2)), bound, denom))
    return series


def _fit(series: LaurentSeries, bound: int) -> LaurentSeries:
    if series.bound < bound:
        raise SeriesError(
            f"lost precision: have q^{series.precision}, need "
            f"q^{Fraction(bound, series.denom)}"
        )
    return series.truncate(bound)


@lru_cache(maxsize=1024)
def phi(
    x: Monomial, bound: int, denom: int = 1, cross_check: bool = True
) -> LaurentSeries:
    """phi(x) = f(x, x)."""
    series = theta_sum(ThetaPair(x, x), bound, denom)
    if cross_check:
        product = euler(x**2, bound, denom, False) ** 5 / (
            euler(x, bound, denom, False) ** 2 * euler(x**4, bound, denom, False) ** 2
        )
        _agree(f"phi({x})", series, _fit(product, bound))
    return series


@lru_cache(maxsize=1024)
def psi(
    x: Monomial, bound: int, denom: int = 1, cross_check: bool = True
) -> LaurentSeries:
    """psi(x) = f(x, x^3)."""
    series = theta_sum(ThetaPair(x, x**3), bound, denom)
    if cross_check:
        product = euler(x**2, bound, denom, False) ** 2 / euler(x, bound, denom, False)
        _agree(f"psi({x})", series, _fit(product, bound))
    return series


@lru_cache(maxsize=1024)
def chi(
    x: Monomial, bound: int, denom: int = 1, cross_check: bool = True
) -> LaurentSeries:
    """chi(x) = (-x; x^2)_inf."""
    series = pochhammer(-x, x**2, bound, denom)
    if cross_check:
        product = euler(x**2, bound, denom, False) ** 2 / (
            euler(x, bound, denom, False) * euler(x**4, bound, denom, False)
        )
        _agree(f"chi({x})", series, _fit(product, bound))
    return series


def _quintuple_lattice(exponents: list[Fraction]) -> int:
    for denom in (5, 10):
        if all((e * denom).denominator == 1 for e in exponents):
            return denom
    raise DenomMismatch(
        "quintuple arguments are not on the 1/5 or 1/10 lattice: "
        + ", ".join(str(e) for e in exponents)
    )


def quintuple_sides(
    B: Monomial, base: Fraction, bound: int
) -> tuple[LaurentSeries, LaurentSeries]:
    """
    Both sides of the quintuple product identity with q replaced by q^base:

        f(B^3 q, q^5/B^3) - B^2 f(q/B^3, B^3 q^5)
            = f(-q^2) f(-B^2, -q^2/B^2) / f(B q, q/B)

    ``bound`` is in fifths of q; the sides come back on the lattice 1/5 when
    they fit there and on 1/10 otherwise.
    """
    Q = Monomial.q(base)
    B2 = B**2
    B3 = B**3
    left_a, left_b = B3 * Q, Q**5 / B3
    right_a, right_b = Q / B3, B3 * Q**5
    den_a, den_b = B * Q, Q / B
    exponents = [
        m.exponent
        for m in (left_a, left_b, right_a, right_b, B2, Q**2, den_a, den_b)
    ]
    denom = _quintuple_lattice(exponents)
    target = bound * denom // 5
    working = target
    for _ in range(4):
        first = theta(left_a, left_b, working, denom, False)
        second = theta(right_a, right_b, working, denom, False).shift(B2.index(denom))
        lhs = first - second.scale(B2.sign)
        numerator = euler(Q**2, working, denom, False) * theta(
            -B2, -(Q**2 / B2), working, denom, False
        )
        rhs = numerator / theta(den_a, den_b, working, denom, False)
        reached = min(lhs.bound, rhs.bound)
        if reached >= target:
            return lhs.truncate(target), rhs.truncate(target)
        log.debug("quintuple margin short by %d, retrying", target - reached)
        working += target - reached
    raise SeriesError("quintuple product sides did not reach the requested order")


def quintuple(B: Monomial, base: int | Fraction, bound: int) -> VerifyOutcome:
    """Check the quintuple product identity for one (B, base) instance."""
    lhs, rhs = quintuple_sides(B, Fraction(base), bound)
    diff = lhs - rhs
    if diff.denom != 5:
        outcome = diff.is_zero()
        if outcome.status is Status.NONZERO:
            return outcome
        diff = diff.restrict(5)
    return diff.is_zero()
