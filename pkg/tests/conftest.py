from __future__ import annotations

import io
import json
from collections.abc import Callable
from importlib import resources

import pytest
from rich.console import Console

from qrr.cli import main
from qrr.partitions import PartitionCatalog, load_partitions
from qrr.registry import Registry


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, monkeypatch):
    """Keep a developer's ~/.config/qrr and QRR_REGISTRY out of the tests."""
    monkeypatch.setenv("QRR_CONFIG", str(tmp_path / "absent.yaml"))
    monkeypatch.delenv("QRR_REGISTRY", raising=False)
    return tmp_path


@pytest.fixture(scope="session")
def registry() -> Registry:
    # the packaged file, whatever QRR_REGISTRY says
    text = resources.files("qrr").joinpath("data", "identities.yaml").read_text("utf-8")
    return Registry.from_text(text, "packaged")


@pytest.fixture(scope="session")
def catalog() -> PartitionCatalog:
    return load_partitions()


@pytest.fixture
def run_cli() -> Callable[..., tuple[int, str]]:
    """Run the CLI in-process; returns (exit code, stdout text)."""

    def run(*argv: str) -> tuple[int, str]:
        buffer = io.StringIO()
        console = Console(file=buffer, width=240, color_system=None)
        code = main(list(argv), console=console)
        return code, buffer.getvalue()

    return run


@pytest.fixture
def run_json(run_cli) -> Callable[..., tuple[int, dict]]:
    def run(*argv: str) -> tuple[int, dict]:
        code, out = run_cli(*argv, "--format", "json")
        return code, json.loads(out)

    return run
