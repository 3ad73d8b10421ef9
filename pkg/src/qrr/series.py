"""
Exact truncated Laurent series in fractional powers of q.

A ``LaurentSeries`` stores integer coefficients for exponents ``k/denom``
with ``lo <= k < bound``. Everything at or above ``bound`` is unknown, and
every operation propagates the bound so a result never claims more
precision than its inputs carry.
"""

from __future__ import annotations

from collections.abc import Iterator, Mapping
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import (
    DenomMismatch,
    FractionalExponent,
    NonUnitLeading,
    SeriesError,
    ZeroSeries,
)

__all__ = ["LaurentSeries", "Status", "VerifyOutcome", "ceil_div"]


def ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


class Status(str, Enum):
    ZERO = "ZERO"
    NONZERO = "NONZERO"


@dataclass(frozen=True)
class VerifyOutcome:
    """Result of a zero test on a truncated series.

    ``checked_to`` is the exclusive exponent bound, in powers of q, up to
    which every coefficient was inspected.
    """

    status: Status
    checked_to: Fraction
    first_exponent: Fraction | None = None
    first_coefficient: int | None = None
    note: str | None = None

    @property
    def ok(self) -> bool:
        return self.status is Status.ZERO

    def describe(self) -> str:
        if self.ok:
            return f"ZERO (checked below q^{self.checked_to})"
        text = (
            f"NONZERO: coefficient {self.first_coefficient} "
            f"at q^{self.first_exponent}"
        )
        if self.note:
            text += f" ({self.note})"
        return text


def _strip(lo: int, coeffs: list[int], bound: int) -> tuple[int, tuple[int, ...]]:
    start = 0
    length = len(coeffs)
    while start < length and coeffs[start] == 0:
        start += 1
    if start == length:
        return bound, ()
    return lo + start, tuple(coeffs[start:])


@dataclass(frozen=True)
class LaurentSeries:
    """
    Truncated Laurent series with exponents on the lattice ``(1/denom) Z``.

    Invariants:
        ``coeffs`` covers indices ``lo .. bound-1`` exactly, and
        ``coeffs[0]`` is non-zero unless the series is zero, in which case
        ``lo == bound`` and ``coeffs`` is empty.
    """

    denom: int
    lo: int
    coeffs: tuple[int, ...]
    bound: int

    # construction

    @classmethod
    def build(
        cls, lo: int, coeffs: list[int], bound: int, denom: int = 1
    ) -> LaurentSeries:
        """Normalize a dense coefficient list starting at index ``lo``."""
        if bound <= lo:
            return cls(denom, bound, (), bound)
        coeffs = list(coeffs[: bound - lo])
        if len(coeffs) < bound - lo:
            coeffs.extend([0] * (bound - lo - len(coeffs)))
        new_lo, stripped = _strip(lo, coeffs, bound)
        return cls(denom, new_lo, stripped, bound)

    @classmethod
    def from_terms(
        cls, terms: Mapping[int, int], bound: int, denom: int = 1
    ) -> LaurentSeries:
        """Build from ``{index: coefficient}``; indices at or above bound drop."""
        live = [k for k, c in terms.items() if c and k < bound]
        if not live:
            return cls.zero(bound, denom)
        lo = min(live)
        dense = [0] * (bound - lo)
        for k in live:
            dense[k - lo] += terms[k]
        return cls.build(lo, dense, bound, denom)

    @classmethod
    def zero(cls, bound: int, denom: int = 1) -> LaurentSeries:
        return cls(denom, bound, (), bound)

    @classmethod
    def constant(cls, value: int, bound: int, denom: int = 1) -> LaurentSeries:
        return cls.monomial(value, 0, bound, denom)

    @classmethod
    def one(cls, bound: int, denom: int = 1) -> LaurentSeries:
        return cls.monomial(1, 0, bound, denom)

    @classmethod
    def monomial(
        cls, coefficient: int, index: int, bound: int, denom: int = 1
    ) -> LaurentSeries:
        if coefficient == 0 or index >= bound:
            return cls.zero(bound, denom)
        return cls.build(index, [coefficient], bound, denom)

    # inspection

    @property
    def is_exact_zero(self) -> bool:
        """True when every coefficient below the bound vanishes."""
        return not self.coeffs

    def coefficient(self, index: int) -> int:
        """Coefficient at lattice index ``index`` (exponent ``index/denom``)."""
        if index >= self.bound:
            raise SeriesError(
                f"coefficient of q^{Fraction(index, self.denom)} is beyond the "
                f"precision bound q^{Fraction(self.bound, self.denom)}"
            )
        if index < self.lo:
            return 0
        return self.coeffs[index - self.lo]

    def terms(self) -> Iterator[tuple[Fraction, int]]:
        """Yield ``(exponent, coefficient)`` for non-zero terms, ascending."""
        for offset, c in enumerate(self.coeffs):
            if c:
                yield Fraction(self.lo + offset, self.denom), c

    def q_order(self) -> Fraction | None:
        """Exponent of the lowest non-zero term, or None for a zero series."""
        if self.is_exact_zero:
            return None
        return Fraction(self.lo, self.denom)

    @property
    def precision(self) -> Fraction:
        """Exclusive exponent bound in powers of q."""
        return Fraction(self.bound, self.denom)

    def is_zero(self) -> VerifyOutcome:
        if self.is_exact_zero:
            return VerifyOutcome(Status.ZERO, self.precision)
        return VerifyOutcome(
            Status.NONZERO,
            self.precision,
            first_exponent=Fraction(self.lo, self.denom),
            first_coefficient=self.coeffs[0],
        )

    # lattice bookkeeping

    def _same_lattice(self, other: LaurentSeries) -> None:
        if self.denom != other.denom:
            raise DenomMismatch(
                f"exponent lattices differ: 1/{self.denom} and 1/{other.denom}"
            )

    def truncate(self, bound: int) -> LaurentSeries:
        if bound >= self.bound:
            return self
        return LaurentSeries.build(self.lo, list(self.coeffs), bound, self.denom)

    def shift(self, k: int) -> LaurentSeries:
        """Multiply by ``q^(k/denom)``."""
        return LaurentSeries(self.denom, self.lo + k, self.coeffs, self.bound + k)

    def embed(self, factor: int) -> LaurentSeries:
        """Same series written on the finer lattice ``1/(denom*factor)``."""
        if factor == 1:
            return self
        return self._spread(factor, self.denom * factor)

    def restrict(self, denom: int) -> LaurentSeries:
        """Same series on the coarser lattice ``1/denom``."""
        if denom == self.denom:
            return self
        if self.denom % denom:
            raise DenomMismatch(
                f"cannot move from lattice 1/{self.denom} to 1/{denom}"
            )
        factor = self.denom // denom
        terms: dict[int, int] = {}
        for offset, c in enumerate(self.coeffs):
            if not c:
                continue
            index = self.lo + offset
            if index % factor:
                raise FractionalExponent(
                    f"term q^{Fraction(index, self.denom)} is not on the "
                    f"lattice 1/{denom}"
                )
            terms[index // factor] = c
        return LaurentSeries.from_terms(terms, ceil_div(self.bound, factor), denom)

    def _spread(self, factor: int, denom: int) -> LaurentSeries:
        if self.is_exact_zero:
            return LaurentSeries.zero(self.bound * factor, denom)
        dense = [0] * ((len(self.coeffs) - 1) * factor + 1)
        dense[::factor] = self.coeffs
        return LaurentSeries.build(
            self.lo * factor, dense, self.bound * factor, denom
        )

    def _integral_index(self, index: int) -> int:
        if index % self.denom:
            raise FractionalExponent(
                f"term q^{Fraction(index, self.denom)} has a fractional exponent"
            )
        return index // self.denom

    # arithmetic

    def __neg__(self) -> LaurentSeries:
        return LaurentSeries(
            self.denom, self.lo, tuple(-c for c in self.coeffs), self.bound
        )

    def __add__(self, other: LaurentSeries | int) -> LaurentSeries:
        if isinstance(other, int):
            other = LaurentSeries.constant(other, self.bound, self.denom)
        self._same_lattice(other)
        bound = min(self.bound, other.bound)
        lo = min(self.lo, other.lo, bound)
        dense = [0] * (bound - lo)
        for series in (self, other):
            start = series.lo - lo
            for offset, c in enumerate(series.coeffs):
                if start + offset >= len(dense):
                    break
                dense[start + offset] += c
        return LaurentSeries.build(lo, dense, bound, self.denom)

    __radd__ = __add__

    def __sub__(self, other: LaurentSeries | int) -> LaurentSeries:
        return self + (-other)

    def __rsub__(self, other: int) -> LaurentSeries:
        return (-self) + other

    def scale(self, factor: int) -> LaurentSeries:
        if factor == 0:
            return LaurentSeries.zero(self.bound, self.denom)
        return LaurentSeries(
            self.denom, self.lo, tuple(factor * c for c in self.coeffs), self.bound
        )

    def __mul__(self, other: LaurentSeries | int) -> LaurentSeries:
        if isinstance(other, int):
            return self.scale(other)
        self._same_lattice(other)
        bound = min(self.bound + other.lo, other.bound + self.lo)
        if self.is_exact_zero or other.is_exact_zero:
            return LaurentSeries.zero(bound, self.denom)
        lo = self.lo + other.lo
        length = bound - lo
        if length <= 0:
            return LaurentSeries.zero(bound, self.denom)
        right = [(j, c) for j, c in enumerate(other.coeffs) if c]
        dense = [0] * length
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            room = length - i
            if room <= 0:
                break
            for j, b in right:
                if j >= room:
                    break
                dense[i + j] += a * b
        return LaurentSeries.build(lo, dense, bound, self.denom)

    __rmul__ = __mul__

    def invert(self) -> LaurentSeries:
        """
        Multiplicative inverse of a unit-leading series.

        The result is exact to ``bound - 2*lo``: the relative precision of
        the input carries over to the reciprocal.

        Raises:
            ZeroSeries: every known coefficient is zero.
            NonUnitLeading: the leading coefficient is not +1 or -1.
        """
        if self.is_exact_zero:
            raise ZeroSeries(
                f"cannot invert a series that vanishes below q^{self.precision}"
            )
        lead = self.coeffs[0]
        if lead not in (1, -1):
            raise NonUnitLeading(lead)
        length = self.bound - self.lo
        tail = [(j, c) for j, c in enumerate(self.coeffs) if j and c]
        inverse = [0] * length
        inverse[0] = lead
        for k in range(1, length):
            acc = 0
            for j, c in tail:
                if j > k:
                    break
                acc += c * inverse[k - j]
            inverse[k] = -lead * acc
        return LaurentSeries.build(
            -self.lo, inverse, self.bound - 2 * self.lo, self.denom
        )

    def __truediv__(self, other: LaurentSeries | int) -> LaurentSeries:
        if isinstance(other, int):
            if other not in (1, -1):
                raise NonUnitLeading(other)
            return self.scale(other)
        return self * other.invert()

    def __rtruediv__(self, other: int) -> LaurentSeries:
        return self.invert().scale(other)

    def __pow__(self, n: int) -> LaurentSeries:
        if n < 0:
            return self.invert() ** (-n)
        result = LaurentSeries.one(self.bound - self.lo, self.denom)
        base = self
        first = True
        while n:
            if n & 1:
                result = base if first else result * base
                first = False
            n >>= 1
            if n:
                base = base * base
        return result

    # substitutions

    def substitute_power(self, k: int) -> LaurentSeries:
        """Replace q by q^k; the bound scales with k."""
        if k < 1:
            raise ValueError(f"substitution power must be positive, got {k}")
        if k == 1:
            return self
        return self._spread(k, self.denom)

    def negate_q(self) -> LaurentSeries:
        """Replace q by -q. Needs every non-zero exponent to be an integer."""
        flipped: list[int] = []
        for offset, c in enumerate(self.coeffs):
            if c and self._integral_index(self.lo + offset) % 2:
                c = -c
            flipped.append(c)
        return LaurentSeries(self.denom, self.lo, tuple(flipped), self.bound)

    def dissect(self, modulus: int, residue: int) -> LaurentSeries:
        """Keep the terms whose integral exponent is congruent to ``residue``."""
        if modulus < 1:
            raise ValueError(f"modulus must be positive, got {modulus}")
        kept: list[int] = []
        for offset, c in enumerate(self.coeffs):
            if c and self._integral_index(self.lo + offset) % modulus != (
                residue % modulus
            ):
                c = 0
            kept.append(c)
        return LaurentSeries.build(self.lo, kept, self.bound, self.denom)

    # display

    def format(self, max_terms: int = 12) -> str:
        parts: list[str] = []
        for count, (exponent, c) in enumerate(self.terms()):
            if count == max_terms:
                parts.append("...")
                break
            parts.append(_format_term(c, exponent, first=not parts))
        body = " ".join(parts) if parts else "0"
        return f"{body} + O(q^{self.precision})"

    def __str__(self) -> str:
        return self.format()


def _format_term(c: int, exponent: Fraction, first: bool) -> str:
    sign = "-" if c < 0 else "+"
    magnitude = abs(c)
    if exponent == 0:
        core = str(magnitude)
    else:
        power = "q" if exponent == 1 else f"q^{exponent}"
        core = power if magnitude == 1 else f"{magnitude}*{power}"
    if first:
        return core if sign == "+" else f"-{core}"
    return f"{sign} {core}"
