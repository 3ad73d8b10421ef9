from __future__ import annotations

from qrr.config import (
    DEFAULT_CONFIG,
    get_config_value,
    load_config,
    lookup,
    save_config,
)


def test_defaults_without_a_file(tmp_path):
    config = load_config(tmp_path / "none.yaml")
    assert config == DEFAULT_CONFIG
    assert config is not DEFAULT_CONFIG


def test_user_values_merge_over_defaults(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text("engine:\n  order: 500\nregistry:\n  jobs: 4\n", encoding="utf-8")
    config = load_config(path)
    assert lookup(config, "engine.order") == 500
    assert lookup(config, "engine.cross_check") is True
    assert lookup(config, "registry.jobs") == 4


def test_broken_file_falls_back_with_a_warning(tmp_path, capsys):
    path = tmp_path / "config.yaml"
    path.write_text("engine: [unclosed", encoding="utf-8")
    assert load_config(path) == DEFAULT_CONFIG
    assert "Could not load config file" in capsys.readouterr().out


def test_lookup_of_missing_keys():
    assert lookup(DEFAULT_CONFIG, "engine.nothing", 7) == 7
    assert lookup(DEFAULT_CONFIG, "engine.order.deeper") is None


def test_environment_selects_the_file(tmp_path, monkeypatch):
    path = tmp_path / "env.yaml"
    path.write_text("partitions:\n  oracle_cap: 80\n", encoding="utf-8")
    monkeypatch.setenv("QRR_CONFIG", str(path))
    assert get_config_value("partitions.oracle_cap") == 80


def test_save_then_load(tmp_path):
    path = tmp_path / "nested" / "config.yaml"
    config = load_config(path)
    config["output"]["format"] = "json"
    assert save_config(config, path)
    assert lookup(load_config(path), "output.format") == "json"
