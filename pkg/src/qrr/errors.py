"""
Error types and user-facing error rendering for qrr.

Two layers live here:

- an exception hierarchy rooted at ``QrrError`` that the kernel, the
  expression evaluator, the registry and the partition counters raise;
- ``SmartError``, the CLI-side rendering that says what went wrong, why,
  how to fix it and what the user might have meant.
"""

from __future__ import annotations

from rich.console import Console
from rich.markup import escape

console = Console(stderr=True)


class QrrError(Exception):
    """Base class for every error raised by qrr."""

    def __init__(self, message: str) -> None:
        super().__init__(message)
        self.message = message
        self.path: list[str] = []

    def add_context(self, node_text: str) -> None:
        """Record an enclosing expression, innermost first."""
        self.path.append(node_text)

    def __str__(self) -> str:
        if not self.path:
            return self.message
        return f"{self.message} (in {self.path[0]})"


# series kernel


class SeriesError(QrrError):
    """Raised by series arithmetic."""


class DenomMismatch(SeriesError):
    """Operands live on different exponent lattices."""


class NonUnitLeading(SeriesError):
    """Inversion of a series whose leading coefficient is not +1 or -1."""

    def __init__(self, coefficient: int) -> None:
        super().__init__(
            f"cannot invert a series with leading coefficient {coefficient}"
        )
        self.coefficient = coefficient


class ZeroSeries(SeriesError):
    """Inversion of a series that is zero up to its bound."""


class FractionalExponent(SeriesError):
    """An operation needs integral exponents but met a fractional one."""


class DivergentPair(SeriesError):
    """A theta pair outside the convergence region."""


class ConsistencyError(QrrError):
    """Two independent constructions of the same series disagree."""


# expressions


class ExprError(QrrError):
    """Raised while parsing or evaluating an expression."""


class ExprSyntaxError(ExprError):
    """Malformed expression text."""

    def __init__(self, message: str, text: str, position: int) -> None:
        super().__init__(f"{message} at position {position}")
        self.text = text
        self.position = position


class UnknownAtom(ExprError):
    """An atom name the grammar does not know."""

    def __init__(self, name: str, suggestions: list[str] | None = None) -> None:
        super().__init__(f'unknown atom "{name}"')
        self.name = name
        self.suggestions = suggestions or []


# registry


class RegistryError(QrrError):
    """Raised by the identity registry."""


class RegistryFormatError(RegistryError):
    """The registry data file is malformed."""


class UnknownId(RegistryError):
    def __init__(self, ident: str, suggestions: list[str] | None = None) -> None:
        super().__init__(f'unknown identity "{ident}"')
        self.ident = ident
        self.suggestions = suggestions or []


class UnknownGroup(RegistryError):
    def __init__(self, group: str, suggestions: list[str] | None = None) -> None:
        super().__init__(f'unknown group "{group}"')
        self.group = group
        self.suggestions = suggestions or []


# partitions


class PartitionError(QrrError):
    """Raised by the partition counters."""


class CapExceeded(PartitionError):
    """The enumeration oracle was asked for n above its cap."""

    def __init__(self, n: int, cap: int) -> None:
        super().__init__(f"n={n} exceeds the enumeration cap of {cap}")
        self.n = n
        self.cap = cap


class UnknownTheorem(PartitionError):
    def __init__(self, theorem: str, suggestions: list[str] | None = None) -> None:
        super().__init__(f'unknown partition theorem "{theorem}"')
        self.theorem = theorem
        self.suggestions = suggestions or []


class UnknownSpec(PartitionError):
    """A theorem refers to a partition function that is not defined."""


class SmartError:
    """Smart error class with actionable feedback."""

    def __init__(
        self,
        message: str,
        reason: str | None = None,
        fix: str | None = None,
        suggestions: list[str] | None = None,
        detail: str | None = None,
    ):
        """
        Initialize a smart error.

        Args:
            message: What went wrong
            reason: Why it happened
            fix: How to fix it
            suggestions: Similar names the user might have meant
            detail: Preformatted extra text, shown verbatim
        """
        self.message = message
        self.reason = reason
        self.fix = fix
        self.suggestions = suggestions or []
        self.detail = detail

    def display(self) -> None:
        """Display the error message with formatting."""
        console.print(f"[red]✗ Error:[/red] {escape(self.message)}")

        if self.detail:
            console.print(escape(self.detail), highlight=False)

        if self.reason:
            console.print(f"\n[dim]{escape(self.reason)}[/dim]")

        if self.fix:
            console.print(f"\n[cyan]💭 Tip:[/cyan] {escape(self.fix)}")

        if self.suggestions:
            console.print("\n[yellow]💡 Did you mean:[/yellow]")
            for suggestion in self.suggestions:
                console.print(f"  • [bold]{escape(suggestion)}[/bold]")

        console.print("\n[dim]📚 See all commands: [bold]qrr --help[/bold][/dim]")


def handle_syntax_error(exc: ExprSyntaxError) -> SmartError:
    """
    Point at the offending character of an expression.

    Args:
        exc: The parse error

    Returns:
        SmartError with a caret under the failing position
    """
    caret = " " * exc.position + "^"
    return SmartError(
        message=exc.message,
        detail=f"  {exc.text}\n  {caret}",
        reason="Expressions use explicit '*', integer powers and atoms such as "
        "G(q^2), f(-q,-q^4) or R(q).",
        fix="See docs/grammar.md for the full grammar.",
    )


def handle_unknown_atom(exc: UnknownAtom) -> SmartError:
    return SmartError(
        message=exc.message,
        reason="Atoms are f, phi, psi, chi, fm, poch, G, H, R and T.",
        fix="Check the spelling of the function name.",
        suggestions=[f"{name}(...)" for name in exc.suggestions],
    )


def handle_unknown_id(exc: UnknownId) -> SmartError:
    """
    Handle an identity id that is not in the registry.

    Args:
        exc: The lookup error

    Returns:
        SmartError with id suggestions
    """
    return SmartError(
        message=exc.message,
        reason=f'"{exc.ident}" is not a registered identity.',
        fix="List the registered ids with: qrr list",
        suggestions=[f"qrr verify {ident}" for ident in exc.suggestions],
    )


def handle_unknown_group(exc: UnknownGroup) -> SmartError:
    return SmartError(
        message=exc.message,
        reason="Groups are main, corollary, gh, lemma, intermediate, concluding "
        "and classical.",
        suggestions=exc.suggestions,
    )


def handle_unknown_theorem(exc: UnknownTheorem) -> SmartError:
    return SmartError(
        message=exc.message,
        fix="Run qrr partitions without --theorem to check all of them.",
        suggestions=exc.suggestions,
    )


def handle_cap_exceeded(exc: CapExceeded) -> SmartError:
    return SmartError(
        message=exc.message,
        reason="The enumeration oracle only cross-checks small n.",
        fix=f"Pass --cross-check {exc.cap} or lower, or raise "
        "partitions.oracle_cap in the config file.",
    )


def handle_series_error(exc: QrrError) -> SmartError:
    """
    Handle a kernel failure raised during evaluation.

    Args:
        exc: Any qrr error without a dedicated handler

    Returns:
        SmartError that shows where in the expression it happened
    """
    detail = None
    if exc.path:
        detail = "\n".join(f"  in {node}" for node in exc.path[:4])
    fix = None
    if isinstance(exc, NonUnitLeading):
        fix = "Multiply both sides by the denominator instead of dividing."
    elif isinstance(exc, FractionalExponent):
        fix = (
            "Substitutions and dissections need integral exponents; clear "
            "q^(m/5) factors first."
        )
    return SmartError(message=exc.message, detail=detail, fix=fix)


def to_smart_error(exc: QrrError) -> SmartError:
    """Pick the right handler for an engine error."""
    if isinstance(exc, ExprSyntaxError):
        return handle_syntax_error(exc)
    if isinstance(exc, UnknownAtom):
        return handle_unknown_atom(exc)
    if isinstance(exc, UnknownId):
        return handle_unknown_id(exc)
    if isinstance(exc, UnknownGroup):
        return handle_unknown_group(exc)
    if isinstance(exc, UnknownTheorem):
        return handle_unknown_theorem(exc)
    if isinstance(exc, CapExceeded):
        return handle_cap_exceeded(exc)
    return handle_series_error(exc)
