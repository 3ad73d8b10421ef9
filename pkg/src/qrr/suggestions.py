"""
Fuzzy matching and suggestion system for qrr.

Provides "did you mean" candidates for mistyped identity ids, group names,
atom names and partition theorems.
"""

from __future__ import annotations

from difflib import get_close_matches

try:
    from thefuzz import fuzz, process
    THEFUZZ_AVAILABLE = True
except ImportError:  # pragma: no cover - thefuzz is a declared dependency
    THEFUZZ_AVAILABLE = False


def closest_names(
    name: str,
    candidates: list[str],
    max_suggestions: int = 5,
    cutoff: float = 0.5,
) -> list[str]:
    """
    Get suggestions for a name using fuzzy matching.

    Args:
        name: The name to match
        candidates: Names that exist
        max_suggestions: Maximum number of suggestions to return
        cutoff: Similarity threshold (0.0 to 1.0)

    Returns:
        Matching candidates in their original case, best first

    Examples:
        >>> closest_names("rrq55", ["t1-1", "t1-2", "rrq5"])
        ['rrq5']
        >>> closest_names("psy", ["phi", "psi", "chi"], max_suggestions=1)
        ['psi']
    """
    query = name.lower().strip()
    if not query or not candidates:
        return []

    by_lower: dict[str, str] = {}
    for original in candidates:
        by_lower.setdefault(original.lower(), original)

    if THEFUZZ_AVAILABLE:
        scored = process.extract(
            query,
            list(by_lower),
            limit=max_suggestions,
            scorer=fuzz.ratio,
        )
        matches = [match for match, score in scored if score >= cutoff * 100]
    else:
        matches = get_close_matches(
            query, list(by_lower), n=max_suggestions, cutoff=cutoff
        )

    return [by_lower[match] for match in matches]


def get_id_suggestions(ident: str, known_ids: list[str]) -> list[str]:
    """Ids are short and dense, so a strict cutoff keeps the list useful."""
    return closest_names(ident, known_ids, max_suggestions=5, cutoff=0.6)


def get_group_suggestions(group: str, groups: list[str]) -> list[str]:
    return closest_names(group, groups, max_suggestions=3, cutoff=0.4)


def get_atom_suggestions(name: str, atoms: list[str]) -> list[str]:
    return closest_names(name, atoms, max_suggestions=3, cutoff=0.3)
