"""
Expression language for q-series identities.

Expressions are parsed into small immutable trees, printed back in a
canonical form, and evaluated to ``PrefixedSeries`` at a requested order.
Orders are measured in fifths of q throughout this module.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import (
    ExprSyntaxError,
    FractionalExponent,
    QrrError,
    SeriesError,
    UnknownAtom,
    ZeroSeries,
)
from .log import get_logger
from .rogers import FIFTHS, R, PrefixedSeries, rr_function
from .series import Status, VerifyOutcome, ceil_div
from .suggestions import get_atom_suggestions
from .theta import Monomial, chi, euler, phi, pochhammer, psi, theta

__all__ = [
    "Add",
    "Atom",
    "Div",
    "Expr",
    "IntLit",
    "Mul",
    "Neg",
    "NegQ",
    "Pow",
    "QPow",
    "Sub",
    "evaluate",
    "parse",
    "prefix_classes",
    "print_canonical",
    "to_t_form",
    "verify",
]

log = get_logger(__name__)

# name -> number of monomial arguments
ATOMS: dict[str, int] = {
    "f": 2,
    "poch": 2,
    "phi": 1,
    "psi": 1,
    "chi": 1,
    "fm": 1,
    "G": 1,
    "H": 1,
    "T": 1,
    "R": 1,
}


# ---------------------------------------------------------------- nodes


@dataclass(frozen=True)
class Atom:
    name: str
    args: tuple[Monomial, ...]


@dataclass(frozen=True)
class IntLit:
    """A non-negative integer; negative constants are ``Neg(IntLit(n))``."""

    value: int

    def __post_init__(self) -> None:
        if self.value < 0:
            raise ValueError(f"integer literal must be non-negative, got {self.value}")


@dataclass(frozen=True)
class QPow:
    """q^(fifths/5)."""

    fifths: int


@dataclass(frozen=True)
class Add:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow:
    base: Expr
    exponent: int


@dataclass(frozen=True)
class Neg:
    operand: Expr


@dataclass(frozen=True)
class NegQ:
    """The operand with q replaced by -q."""

    operand: Expr


Expr = Atom | IntLit | QPow | Add | Sub | Mul | Div | Pow | Neg | NegQ


# ---------------------------------------------------------------- lexer
#
# GRAMMAR
#
# expr     := term (("+" | "-") term)*
# term     := unary (("*" | "/") unary)*
# unary    := "-" unary | power
# power    := primary ("^" exponent)*
# exponent := INT | "-" INT | "(" ["-"] INT ")"
# primary  := INT | qpow | atom | "negq" "(" expr ")" | "$" NAME | "(" expr ")"
# qpow     := "q" ["^" (INT | "(" ["-"] INT ["/" INT] ")")]
# atom     := NAME "(" arg ["," arg] ")"
# arg      := ["-"] "q" ["^" INT]


class Tok(str, Enum):
    INT = "integer"
    NAME = "name"
    OP = "operator"
    EOF = "end of input"


@dataclass(frozen=True)
class Token:
    kind: Tok
    text: str
    pos: int


_SINGLE = set("+-*/^(),$")


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            start = i
            while i < len(text) and text[i].isdigit():
                i += 1
            tokens.append(Token(Tok.INT, text[start:i], start))
        elif ch.isalpha() or ch == "_":
            start = i
            while i < len(text) and (text[i].isalnum() or text[i] == "_"):
                i += 1
            tokens.append(Token(Tok.NAME, text[start:i], start))
        elif ch in _SINGLE:
            tokens.append(Token(Tok.OP, ch, i))
            i += 1
        else:
            raise ExprSyntaxError(f"unexpected character {ch!r}", text, i)
    tokens.append(Token(Tok.EOF, "", len(text)))
    return tokens


# ---------------------------------------------------------------- parser


class Parser:
    def __init__(self, text: str, definitions: Mapping[str, Expr] | None = None):
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0
        self.definitions = definitions or {}

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _fail(self, message: str, token: Token | None = None) -> ExprSyntaxError:
        token = token or self.current
        return ExprSyntaxError(message, self.text, token.pos)

    def _advance(self) -> Token:
        token = self.current
        self.index += 1
        return token

    def _is_op(self, symbol: str) -> bool:
        return self.current.kind is Tok.OP and self.current.text == symbol

    def _expect_op(self, symbol: str) -> Token:
        if not self._is_op(symbol):
            found = self.current.text or self.current.kind.value
            raise self._fail(f"expected '{symbol}' but found '{found}'")
        return self._advance()

    def _expect_int(self) -> int:
        if self.current.kind is not Tok.INT:
            raise self._fail("expected an integer")
        return int(self._advance().text)

    def parse(self) -> Expr:
        node = self.expr()
        if self.current.kind is not Tok.EOF:
            raise self._fail(f"unexpected '{self.current.text}'")
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self._is_op("+") or self._is_op("-"):
            op = self._advance().text
            right = self.term()
            node = Add(node, right) if op == "+" else Sub(node, right)
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self._is_op("*") or self._is_op("/"):
            op = self._advance().text
            right = self.unary()
            node = Mul(node, right) if op == "*" else Div(node, right)
        return node

    def unary(self) -> Expr:
        if self._is_op("-"):
            self._advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        node = self.primary()
        while self._is_op("^"):
            self._advance()
            node = Pow(node, self.exponent())
        return node

    def exponent(self) -> int:
        if self._is_op("("):
            self._advance()
            sign = -1 if self._is_op("-") else 1
            if sign < 0:
                self._advance()
            value = sign * self._expect_int()
            self._expect_op(")")
            return value
        if self._is_op("-"):
            self._advance()
            return -self._expect_int()
        return self._expect_int()

    def primary(self) -> Expr:
        token = self.current
        if token.kind is Tok.INT:
            self._advance()
            return IntLit(int(token.text))
        if self._is_op("("):
            self._advance()
            node = self.expr()
            self._expect_op(")")
            return node
        if self._is_op("$"):
            self._advance()
            name = self.current
            if name.kind is not Tok.NAME:
                raise self._fail("expected a definition name after '$'")
            self._advance()
            if name.text not in self.definitions:
                raise self._fail(f"undefined reference ${name.text}", name)
            return self.definitions[name.text]
        if token.kind is Tok.NAME:
            if token.text == "q":
                return self.qpow()
            if token.text == "negq":
                self._advance()
                self._expect_op("(")
                node = self.expr()
                self._expect_op(")")
                return NegQ(node)
            return self.atom()
        found = token.text or token.kind.value
        raise self._fail(f"unexpected '{found}'")

    def qpow(self) -> Expr:
        self._advance()
        if not self._is_op("^"):
            return QPow(FIFTHS)
        self._advance()
        if not self._is_op("("):
            return QPow(FIFTHS * self._expect_int())
        start = self._advance()
        sign = 1
        if self._is_op("-"):
            self._advance()
            sign = -1
        num = sign * self._expect_int()
        den = 1
        if self._is_op("/"):
            self._advance()
            den = self._expect_int()
        self._expect_op(")")
        if den == 0:
            raise self._fail("zero denominator in exponent", start)
        fifths = Fraction(num * FIFTHS, den)
        if fifths.denominator != 1:
            raise self._fail("exponents must be multiples of 1/5", start)
        return QPow(fifths.numerator)

    def atom(self) -> Expr:
        token = self._advance()
        arity = ATOMS.get(token.text)
        if arity is None:
            raise UnknownAtom(token.text, get_atom_suggestions(token.text, list(ATOMS)))
        self._expect_op("(")
        args = [self.arg()]
        while self._is_op(","):
            self._advance()
            args.append(self.arg())
        closing = self._expect_op(")")
        if len(args) != arity:
            raise self._fail(
                f"{token.text} takes {arity} argument(s), got {len(args)}", closing
            )
        return Atom(token.text, tuple(args))

    def arg(self) -> Monomial:
        sign = 1
        if self._is_op("-"):
            self._advance()
            sign = -1
        if not (self.current.kind is Tok.NAME and self.current.text == "q"):
            raise self._fail("atom arguments look like q, q^k, -q or -q^k")
        self._advance()
        k = 1
        if self._is_op("^"):
            self._advance()
            k = self._expect_int()
            if k < 1:
                raise self._fail("argument powers must be positive")
        return Monomial.q(k, sign)


def parse(text: str, definitions: Mapping[str, Expr] | None = None) -> Expr:
    """
    Parse expression text.

    Args:
        text: e.g. ``"R(q)^5 - q*T(q^5)"``
        definitions: named sub-expressions reachable as ``$NAME``

    Raises:
        ExprSyntaxError: malformed text, with the failing position.
        UnknownAtom: a function name outside the atom table.
    """
    return Parser(text, definitions).parse()


# ---------------------------------------------------------------- printer

_PREC_SUM, _PREC_PRODUCT, _PREC_UNARY, _PREC_POWER, _PREC_PRIMARY = range(1, 6)


def _format_arg(arg: Monomial) -> str:
    body = "q" if arg.exponent == 1 else f"q^{arg.exponent}"
    return body if arg.sign > 0 else f"-{body}"


def _precedence(node: Expr) -> int:
    match node:
        case Add() | Sub():
            return _PREC_SUM
        case Mul() | Div():
            return _PREC_PRODUCT
        case Neg():
            return _PREC_UNARY
        case Pow():
            return _PREC_POWER
        case QPow(fifths=fifths):
            return _PREC_PRIMARY if fifths == FIFTHS else _PREC_POWER
        case _:
            return _PREC_PRIMARY


def _wrap(node: Expr, minimum: int) -> str:
    text = print_canonical(node)
    return f"({text})" if _precedence(node) < minimum else text


def _right(node: Expr, minimum: int) -> str:
    if isinstance(node, Neg):
        return f"({print_canonical(node)})"
    return _wrap(node, minimum)


def print_canonical(node: Expr) -> str:
    """Shortest parenthesization that parses back to the same tree."""
    match node:
        case IntLit(value=value):
            return str(value)
        case QPow(fifths=fifths):
            if fifths % FIFTHS == 0:
                k = fifths // FIFTHS
                if k == 1:
                    return "q"
                return f"q^{k}" if k >= 0 else f"q^({k})"
            return f"q^({fifths}/{FIFTHS})"
        case Atom(name=name, args=args):
            return f"{name}({','.join(_format_arg(a) for a in args)})"
        case Add(left=left, right=right):
            return f"{_wrap(left, _PREC_SUM)}+{_right(right, _PREC_PRODUCT)}"
        case Sub(left=left, right=right):
            return f"{_wrap(left, _PREC_SUM)}-{_right(right, _PREC_PRODUCT)}"
        case Mul(left=left, right=right):
            return f"{_wrap(left, _PREC_PRODUCT)}*{_right(right, _PREC_UNARY)}"
        case Div(left=left, right=right):
            return f"{_wrap(left, _PREC_PRODUCT)}/{_right(right, _PREC_UNARY)}"
        case Neg(operand=operand):
            return f"-{_wrap(operand, _PREC_UNARY)}"
        case Pow(base=base, exponent=exponent):
            power = str(exponent) if exponent >= 0 else f"({exponent})"
            if isinstance(base, QPow):
                return f"({print_canonical(base)})^{power}"
            return f"{_wrap(base, _PREC_PRIMARY)}^{power}"
        case NegQ(operand=operand):
            return f"negq({print_canonical(operand)})"
    raise TypeError(f"not an expression node: {node!r}")


# ---------------------------------------------------------------- rewriting


def to_t_form(node: Expr) -> Expr:
    """Replace every R(q^k) by q^(k/5)*T(q^k)."""
    match node:
        case Atom(name="R", args=(arg,)) if arg.sign > 0:
            k = arg.exponent.numerator
            return Mul(QPow(k), Atom("T", node.args))
        case Add(left=left, right=right):
            return Add(to_t_form(left), to_t_form(right))
        case Sub(left=left, right=right):
            return Sub(to_t_form(left), to_t_form(right))
        case Mul(left=left, right=right):
            return Mul(to_t_form(left), to_t_form(right))
        case Div(left=left, right=right):
            return Div(to_t_form(left), to_t_form(right))
        case Pow(base=base, exponent=exponent):
            return Pow(to_t_form(base), exponent)
        case Neg(operand=operand):
            return Neg(to_t_form(operand))
        case NegQ(operand=operand):
            return NegQ(to_t_form(operand))
    return node


def prefix_classes(node: Expr) -> frozenset[int]:
    """Residues mod 5 of the fractional q-prefixes an expression can carry."""
    match node:
        case Atom(name="R", args=(arg,)):
            return frozenset({arg.exponent.numerator % FIFTHS})
        case QPow(fifths=fifths):
            return frozenset({fifths % FIFTHS})
        case Add(left=left, right=right) | Sub(left=left, right=right):
            return prefix_classes(left) | prefix_classes(right)
        case Mul(left=left, right=right):
            return frozenset(
                (a + b) % FIFTHS
                for a in prefix_classes(left)
                for b in prefix_classes(right)
            )
        case Div(left=left, right=right):
            return frozenset(
                (a - b) % FIFTHS
                for a in prefix_classes(left)
                for b in prefix_classes(right)
            )
        case Pow(base=base, exponent=exponent):
            return frozenset((a * exponent) % FIFTHS for a in prefix_classes(base))
        case Neg(operand=operand) | NegQ(operand=operand):
            return prefix_classes(operand)
    return frozenset({0})


# ---------------------------------------------------------------- evaluation


def _estimate(node: Expr) -> tuple[int, int]:
    """
    (valuation, deficit) in fifths.

    The valuation is a lower estimate of the leading exponent. The deficit
    is how far below the working order the node's result is known when
    every atom is expanded to that order.
    """
    match node:
        case Atom(name="R", args=(arg,)):
            return arg.exponent.numerator, 0
        case Atom() | IntLit():
            return 0, 0
        case QPow(fifths=fifths):
            return fifths, 0
        case Add(left=left, right=right) | Sub(left=left, right=right):
            (va, da), (vb, db) = _estimate(left), _estimate(right)
            return min(va, vb), max(da, db)
        case Mul(left=left, right=right):
            return _product_estimate(_estimate(left), _estimate(right))
        case Div(left=left, right=right):
            vb, db = _estimate(right)
            return _product_estimate(_estimate(left), (-vb, db + 2 * vb))
        case Pow(base=base, exponent=exponent):
            v, d = _estimate(base)
            if exponent < 0:
                v, d = -v, d + 2 * v
                exponent = -exponent
            if exponent == 0:
                return 0, 0
            return exponent * v, d - (exponent - 1) * v
        case Neg(operand=operand) | NegQ(operand=operand):
            return _estimate(operand)
    raise TypeError(f"not an expression node: {node!r}")


def _product_estimate(a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int]:
    (va, da), (vb, db) = a, b
    return va + vb, max(da - vb, db - va)


def margin(node: Expr) -> int:
    """Extra fifths to expand atoms by so the result reaches the order."""
    return max(0, _estimate(node)[1])


@dataclass(frozen=True)
class _Context:
    working: int
    cross_check: bool

    @property
    def body_bound(self) -> int:
        return max(ceil_div(self.working, FIFTHS), 1)


def _atom(node: Atom, ctx: _Context) -> PrefixedSeries:
    name, args = node.name, node.args
    bound = ctx.body_bound
    check = ctx.cross_check
    if name == "R":
        (arg,) = args
        if arg.sign < 0:
            raise FractionalExponent(
                f"R({_format_arg(arg)}) needs a branch of a fifth root; "
                "write it through T instead"
            )
        return R(arg.exponent.numerator, ctx.working, check)
    if name in ("G", "H", "T"):
        (arg,) = args
        series = rr_function(name, arg.sign, arg.exponent.numerator, bound, check)
    elif name == "f":
        series = theta(args[0], args[1], bound, 1, check)
    elif name == "poch":
        series = pochhammer(args[0], args[1], bound)
    elif name == "phi":
        series = phi(args[0], bound, 1, check)
    elif name == "psi":
        series = psi(args[0], bound, 1, check)
    elif name == "chi":
        series = chi(args[0], bound, 1, check)
    elif name == "fm":
        series = euler(args[0], bound, 1, check)
    else:
        raise UnknownAtom(name, get_atom_suggestions(name, list(ATOMS)))
    return PrefixedSeries.plain(series)


def _eval(node: Expr, ctx: _Context) -> PrefixedSeries:
    try:
        match node:
            case Atom():
                return _atom(node, ctx)
            case IntLit(value=value):
                return PrefixedSeries.constant(value, ctx.working)
            case QPow(fifths=fifths):
                return PrefixedSeries.q_power(fifths, ctx.working)
            case Add(left=left, right=right):
                return _eval(left, ctx) + _eval(right, ctx)
            case Sub(left=left, right=right):
                return _eval(left, ctx) - _eval(right, ctx)
            case Mul(left=left, right=right):
                return _mul(left, right, ctx)
            case Div(left=left, right=right):
                return _eval(left, ctx) / _eval(right, ctx)
            case Pow(base=base, exponent=exponent):
                if exponent == 0:
                    return PrefixedSeries.constant(1, ctx.working)
                return _eval(base, ctx) ** exponent
            case Neg(operand=operand):
                return -_eval(operand, ctx)
            case NegQ(operand=operand):
                return _eval(operand, ctx).negate_q()
    except QrrError as exc:
        exc.add_context(print_canonical(node))
        raise
    raise TypeError(f"not an expression node: {node!r}")


def _mul(left: Expr, right: Expr, ctx: _Context) -> PrefixedSeries:
    # integer literals scale exactly, without a constant series
    if isinstance(left, IntLit):
        return _eval(right, ctx).scale(left.value)
    if isinstance(right, IntLit):
        return _eval(left, ctx).scale(right.value)
    return _eval(left, ctx) * _eval(right, ctx)


def evaluate(
    node: Expr, order: int, cross_check: bool = True, retries: int = 3
) -> PrefixedSeries:
    """
    Evaluate an expression so the result is exact below ``q^(order/5)``.

    Atoms are expanded past ``order`` by the static margin. If cancellation
    in a denominator still costs precision, the shortfall is added and the
    evaluation repeated, up to ``retries`` times.
    """
    working = order + margin(node)
    for attempt in range(retries + 1):
        try:
            result = _eval(node, _Context(working, cross_check))
        except ZeroSeries:
            if attempt == retries:
                raise
            log.debug("zero denominator at working order %d, widening", working)
            working += order
            continue
        reached = result.bound_fifths
        if reached >= order:
            return result
        log.debug(
            "order %d reached only %d at working order %d, retrying",
            order,
            reached,
            working,
        )
        working += order - reached
    raise SeriesError(
        f"could not reach q^({order}/5) after {retries} widenings of the margin"
    )


def verify(
    lhs: Expr, rhs: Expr, order: int, cross_check: bool = True, retries: int = 3
) -> VerifyOutcome:
    """Decide lhs - rhs == 0 below ``q^(order/5)``."""
    left = evaluate(lhs, order, cross_check, retries)
    right = evaluate(rhs, order, cross_check, retries)
    outcome = (left - right).is_zero(order)
    if outcome.status is Status.ZERO:
        return outcome
    note = _imbalance_note(left, right)
    if note:
        outcome = VerifyOutcome(
            outcome.status,
            outcome.checked_to,
            outcome.first_exponent,
            outcome.first_coefficient,
            note,
        )
    return outcome


def _imbalance_note(left: PrefixedSeries, right: PrefixedSeries) -> str | None:
    a, b = left.leading_fifths(), right.leading_fifths()
    if a is None or b is None or (a - b) % FIFTHS == 0:
        return None
    return (
        f"prefix imbalance: left side starts at q^{Fraction(a, FIFTHS)}, "
        f"right side at q^{Fraction(b, FIFTHS)}"
    )
