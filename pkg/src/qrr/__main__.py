from __future__ import annotations

import sys

from .cli import main


def run() -> None:
    """Entry point for the qrr command."""
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        print("\nInterrupted.", file=sys.stderr)
        sys.exit(130)


if __name__ == "__main__":
    run()
