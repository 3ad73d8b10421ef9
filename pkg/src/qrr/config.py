"""Configuration management for qrr with sensible defaults."""

from __future__ import annotations

import copy
import os
from pathlib import Path
from typing import Any

import yaml

# Orders are in fifth-units of q throughout.
DEFAULT_CONFIG: dict[str, Any] = {
    'engine': {
        'order': 200,
        'cross_check': True,
        'margin_retries': 3,
    },
    'registry': {
        'path': None,
        'jobs': 1,
    },
    'partitions': {
        'oracle_cap': 60,
        'max_n': 100,
    },
    'output': {
        'format': 'text',
    },
    'logging': {
        'level': 'WARNING',
    },
}

CONFIG_ENV = 'QRR_CONFIG'


def _config_path() -> Path:
    """Get the standard config file path."""
    override = os.environ.get(CONFIG_ENV)
    if override:
        return Path(override).expanduser()
    return Path.home() / '.config' / 'qrr' / 'config.yaml'


def _deep_merge(base: dict[str, Any], override: dict[str, Any]) -> None:
    """Deep merge override dict into base dict."""
    for key, value in override.items():
        if key in base and isinstance(base[key], dict) and isinstance(value, dict):
            _deep_merge(base[key], value)
        else:
            base[key] = value


def load_config(path: Path | None = None) -> dict[str, Any]:
    """
    Load configuration with fallback to defaults.

    Args:
        path: Explicit config file; defaults to ``~/.config/qrr/config.yaml``
            or ``$QRR_CONFIG``.

    Returns:
        Configuration dictionary with user settings merged over defaults.
    """
    config = copy.deepcopy(DEFAULT_CONFIG)

    config_path = path or _config_path()
    if config_path.exists():
        try:
            with open(config_path, encoding='utf-8') as f:
                user_config = yaml.safe_load(f) or {}
            if isinstance(user_config, dict):
                _deep_merge(config, user_config)
        except (OSError, yaml.YAMLError) as e:
            print(f"Warning: Could not load config file {config_path}: {e}")

    return config


def save_config(config: dict[str, Any], path: Path | None = None) -> bool:
    """
    Save configuration to file.

    Args:
        config: Configuration dictionary to save.
        path: Destination; defaults to the standard config path.

    Returns:
        True if saved successfully, False otherwise.
    """
    try:
        config_path = path or _config_path()
        config_path.parent.mkdir(parents=True, exist_ok=True)

        with open(config_path, 'w', encoding='utf-8') as f:
            yaml.safe_dump(config, f, default_flow_style=False, sort_keys=True)

        return True
    except OSError as e:
        print(f"Error saving config: {e}")
        return False


def lookup(config: dict[str, Any], key_path: str, default: Any = None) -> Any:
    """Walk a dot-separated key path through a loaded config."""
    current: Any = config
    for key in key_path.split('.'):
        if isinstance(current, dict) and key in current:
            current = current[key]
        else:
            return default
    return current


def get_config_value(key_path: str, default: Any = None) -> Any:
    """
    Get a configuration value using dot notation.

    Args:
        key_path: Dot-separated path to the config value (e.g., 'engine.order').
        default: Default value if key is not found.

    Returns:
        Configuration value or default.
    """
    return lookup(load_config(), key_path, default)
