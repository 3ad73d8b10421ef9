"""Exact q-series engine for the Rogers-Ramanujan modular identities."""

__all__ = ["__version__"]
__version__ = "0.3.0"
