"""Subcommand handlers. Each takes parsed arguments and an AppContext and
returns the process exit code."""
