"""
The Rogers-Ramanujan functions G, H, their quotient T and the continued
fraction R = q^(1/5) T.

R carries its q^(1/5) factor as a separate prefix so the body stays on the
integral lattice: ``PrefixedSeries(prefix, body)`` stands for
``q^(prefix/5) * body``. Arithmetic keeps that split while prefixes agree
and falls back to the 1/5 lattice when they do not.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import ConsistencyError, DenomMismatch, FractionalExponent
from .log import get_logger
from .series import LaurentSeries, Status, VerifyOutcome, ceil_div
from .theta import Monomial, reciprocal_product

__all__ = [
    "PrefixedSeries",
    "R",
    "cf_convergent",
    "g_product",
    "g_sum",
    "h_product",
    "h_sum",
    "rr_function",
    "twisted",
]

log = get_logger(__name__)

FIFTHS = 5


@dataclass(frozen=True)
class PrefixedSeries:
    """
    ``q^(prefix/5) * body``.

    With an integral body (``body.denom == 1``) the prefix is kept in
    ``0..4``. A body on the 1/5 lattice is "lifted" and always has prefix 0.
    """

    prefix: int
    body: LaurentSeries

    @classmethod
    def of(cls, prefix: int, body: LaurentSeries) -> PrefixedSeries:
        if body.denom == 1:
            whole, rest = divmod(prefix, FIFTHS)
            return cls(rest, body.shift(whole) if whole else body)
        if body.denom != FIFTHS:
            raise DenomMismatch(f"prefixed bodies live on 1 or 1/5, not 1/{body.denom}")
        return cls(0, body.shift(prefix) if prefix else body)

    @classmethod
    def plain(cls, body: LaurentSeries) -> PrefixedSeries:
        return cls.of(0, body)

    @classmethod
    def constant(cls, value: int, bound_fifths: int) -> PrefixedSeries:
        return cls(0, LaurentSeries.constant(value, ceil_div(bound_fifths, FIFTHS)))

    @classmethod
    def q_power(cls, fifths: int, bound_fifths: int) -> PrefixedSeries:
        """q^(fifths/5) known below q^(bound_fifths/5)."""
        whole, rest = divmod(fifths, FIFTHS)
        body_bound = ceil_div(bound_fifths - rest, FIFTHS)
        return cls(rest, LaurentSeries.monomial(1, whole, body_bound))

    @property
    def lifted(self) -> bool:
        return self.body.denom != 1

    def to_laurent(self) -> LaurentSeries:
        """The same series on the 1/5 lattice."""
        if self.lifted:
            return self.body
        return self.body.embed(FIFTHS).shift(self.prefix)

    @property
    def bound_fifths(self) -> int:
        if self.lifted:
            return self.body.bound
        return self.prefix + FIFTHS * self.body.bound

    @property
    def is_exact_zero(self) -> bool:
        return self.body.is_exact_zero

    def q_order(self) -> Fraction | None:
        if self.body.is_exact_zero:
            return None
        if self.lifted:
            return self.body.q_order()
        return Fraction(self.prefix + FIFTHS * self.body.lo, FIFTHS)

    def leading_fifths(self) -> int | None:
        order = self.q_order()
        return None if order is None else int(order * FIFTHS)

    def _pair(self, other: PrefixedSeries) -> tuple[LaurentSeries, LaurentSeries]:
        return self.to_laurent(), other.to_laurent()

    def __add__(self, other: PrefixedSeries) -> PrefixedSeries:
        if not self.lifted and not other.lifted and self.prefix == other.prefix:
            return PrefixedSeries(self.prefix, self.body + other.body)
        left, right = self._pair(other)
        return PrefixedSeries(0, left + right)

    def __neg__(self) -> PrefixedSeries:
        return PrefixedSeries(self.prefix, -self.body)

    def __sub__(self, other: PrefixedSeries) -> PrefixedSeries:
        return self + (-other)

    def scale(self, factor: int) -> PrefixedSeries:
        return PrefixedSeries(self.prefix, self.body.scale(factor))

    def __mul__(self, other: PrefixedSeries) -> PrefixedSeries:
        if not self.lifted and not other.lifted:
            return PrefixedSeries.of(self.prefix + other.prefix, self.body * other.body)
        left, right = self._pair(other)
        return PrefixedSeries(0, left * right)

    def invert(self) -> PrefixedSeries:
        if self.lifted:
            return PrefixedSeries(0, self.body.invert())
        return PrefixedSeries.of(-self.prefix, self.body.invert())

    def __truediv__(self, other: PrefixedSeries) -> PrefixedSeries:
        return self * other.invert()

    def __pow__(self, n: int) -> PrefixedSeries:
        if n < 0:
            return self.invert() ** (-n)
        if self.lifted:
            return PrefixedSeries(0, self.body**n)
        return PrefixedSeries.of(self.prefix * n, self.body**n)

    def negate_q(self) -> PrefixedSeries:
        if self.lifted:
            return PrefixedSeries(0, self.body.negate_q())
        if self.prefix:
            raise FractionalExponent(
                f"q -> -q needs a branch of (-q)^({self.prefix}/5)"
            )
        return PrefixedSeries(0, self.body.negate_q())

    def substitute_power(self, k: int) -> PrefixedSeries:
        if self.lifted:
            return PrefixedSeries(0, self.body.substitute_power(k))
        return PrefixedSeries.of(self.prefix * k, self.body.substitute_power(k))

    def dissect(self, modulus: int, residue: int) -> PrefixedSeries:
        if not self.lifted and self.prefix == 0:
            return PrefixedSeries(0, self.body.dissect(modulus, residue))
        return PrefixedSeries(0, self.to_laurent().dissect(modulus, residue))

    def truncated(self, bound_fifths: int) -> LaurentSeries:
        """The series on the 1/5 lattice, cut at ``q^(bound_fifths/5)``."""
        return self.to_laurent().truncate(bound_fifths)

    def is_zero(self, bound_fifths: int | None = None) -> VerifyOutcome:
        series = self.to_laurent()
        if bound_fifths is not None:
            series = series.truncate(bound_fifths)
        return series.is_zero()

    def format(self, max_terms: int = 12) -> str:
        return self.to_laurent().format(max_terms)

    def __str__(self) -> str:
        return self.format()


# G and H, in two independent ways


def _rr_sum(shift_linear: int, bound: int) -> LaurentSeries:
    """sum over n of q^(n^2 + shift_linear*n) / (q; q)_n."""
    if bound <= 0:
        return LaurentSeries.zero(bound)
    total = [0] * bound
    # running holds 1/(q;q)_n, updated one factor at a time
    running = [1] + [0] * (bound - 1)
    n = 0
    while n * n + shift_linear * n < bound:
        if n:
            for i in range(n, bound):
                running[i] += running[i - n]
        start = n * n + shift_linear * n
        for i in range(start, bound):
            total[i] += running[i - start]
        n += 1
    return LaurentSeries.build(0, total, bound)


def g_sum(bound: int) -> LaurentSeries:
    """G(q) = sum q^(n^2)/(q;q)_n."""
    return _rr_sum(0, bound)


def h_sum(bound: int) -> LaurentSeries:
    """H(q) = sum q^(n^2+n)/(q;q)_n."""
    return _rr_sum(1, bound)


def _q5_product(first: int, bound: int) -> LaurentSeries:
    q5 = Monomial.q(5)
    return reciprocal_product(
        [(Monomial.q(first), q5, 1), (Monomial.q(5 - first), q5, 1)], bound
    )


def g_product(bound: int) -> LaurentSeries:
    """G(q) = 1/((q;q^5)(q^4;q^5))."""
    return _q5_product(1, bound)


def h_product(bound: int) -> LaurentSeries:
    """H(q) = 1/((q^2;q^5)(q^3;q^5))."""
    return _q5_product(2, bound)


def _checked(name: str, first: LaurentSeries, second: LaurentSeries) -> LaurentSeries:
    outcome = (first - second).is_zero()
    if outcome.status is Status.NONZERO:
        raise ConsistencyError(
            f"{name}: independent constructions disagree at "
            f"q^{outcome.first_exponent}"
        )
    return first


@lru_cache(maxsize=256)
def _base(name: str, bound: int, cross_check: bool) -> LaurentSeries:
    """G, H or T at argument q."""
    log.debug("building %s(q) below q^%d", name, bound)
    if name == "G":
        series = g_sum(bound)
        return _checked("G", series, g_product(bound)) if cross_check else series
    if name == "H":
        series = h_sum(bound)
        return _checked("H", series, h_product(bound)) if cross_check else series
    if name == "T":
        return _base("H", bound, cross_check) / _base("G", bound, cross_check)
    raise ValueError(f"not a Rogers-Ramanujan function: {name}")


def _at(name: str, k: int, bound: int, cross_check: bool) -> LaurentSeries:
    return _base(name, ceil_div(bound, k), cross_check).substitute_power(k).truncate(
        bound
    )


@lru_cache(maxsize=256)
def twisted(name: str, bound: int, cross_check: bool = True) -> LaurentSeries:
    """
    G, H or T at argument -q, below q^bound.

    With ``cross_check`` the result is compared against the quotient of
    untwisted functions at q, q^2 and q^4.
    """
    series = _base(name, bound, cross_check).negate_q()
    if not cross_check:
        return series
    if name == "G":
        other = _at("G", 2, bound, True) * _at("H", 2, bound, True) ** 2 / (
            _at("G", 1, bound, True) * _at("H", 4, bound, True)
        )
    elif name == "H":
        other = _at("H", 2, bound, True) * _at("G", 2, bound, True) ** 2 / (
            _at("H", 1, bound, True) * _at("G", 4, bound, True)
        )
    else:
        other = _at("T", 4, bound, True) / (
            _at("T", 1, bound, True) * _at("T", 2, bound, True)
        )
    return _checked(f"{name}(-q)", series, other.truncate(bound))


@lru_cache(maxsize=1024)
def rr_function(
    name: str, sign: int, k: int, bound: int, cross_check: bool = True
) -> LaurentSeries:
    """
    G, H or T evaluated at ``sign * q^k``.

    Args:
        name: "G", "H" or "T"
        sign: +1 or -1
        k: positive power of q in the argument
        bound: exclusive bound in powers of q
        cross_check: compare sum and product forms (and the -q quotient
            formulas for negative arguments)
    """
    inner = ceil_div(bound, k)
    if sign > 0:
        base = _base(name, inner, cross_check)
    else:
        base = twisted(name, inner, cross_check)
    return base.substitute_power(k).truncate(bound)


def R(k: int, bound_fifths: int, cross_check: bool = True) -> PrefixedSeries:
    """R(q^k) = q^(k/5) T(q^k), known below q^(bound_fifths/5)."""
    body_bound = max(ceil_div(bound_fifths - k, FIFTHS), 1)
    return PrefixedSeries.of(k, rr_function("T", 1, k, body_bound, cross_check))


def cf_convergent(depth: int, bound_fifths: int) -> PrefixedSeries:
    """
    q^(1/5) / (1 + q/(1 + q^2/(... /(1 + q^depth)))).

    Built bottom-up from the innermost denominator.
    """
    bound = max(ceil_div(bound_fifths - 1, FIFTHS), 1)
    tail = LaurentSeries.one(bound)
    for j in range(depth, 0, -1):
        tail = LaurentSeries.monomial(1, j, bound) / tail + 1
    return PrefixedSeries.of(1, tail.invert())


def default_depth(bound_fifths: int) -> int:
    """Deep enough that the convergent agrees with R below the bound."""
    return max(1, 2 * bound_fifths // FIFTHS)
