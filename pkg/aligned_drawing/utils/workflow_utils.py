"""
Shared helpers for the command-line tools: locating the project and loading config.
"""

from pathlib import Path
from typing import Any, Dict, Optional

import yaml

from aligned_drawing.models.config import ToolConfig
from aligned_drawing.utils.logger import logger

DEFAULT_CONFIG_NAME = "aligned_config.yaml"


def get_project_root() -> Path:
    """
    Get the project root directory by searching for marker files.

    Searches upward from this file for a .git directory or a build manifest.
    """
    current = Path(__file__).resolve()

    for parent in [current, *current.parents]:
        if any(
            [
                (parent / ".git").exists(),
                (parent / "pyproject.toml").exists(),
                (parent / "setup.py").exists(),
            ]
        ):
            return parent

    # Fallback: assume current working directory
    return Path.cwd()


def default_config_path() -> Path:
    return get_project_root() / "config" / DEFAULT_CONFIG_NAME


def merge_configs(default_config: Dict[str, Any], custom_config: Dict[str, Any]) -> Dict[str, Any]:
    """
    Merge custom configuration into default configuration.

    Nested sections are merged key by key; custom values override defaults and None
    values in the custom config are ignored.

    Args:
        default_config: Default configuration dict
        custom_config: Custom configuration dict (overrides defaults)

    Returns:
        Merged configuration dict
    """
    merged = default_config.copy()

    for key, value in custom_config.items():
        if value is None:
            continue
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = merge_configs(merged[key], value)
        else:
            merged[key] = value

    return merged


def _read_yaml(path: Path) -> Dict[str, Any]:
    try:
        with open(path, "r") as f:
            data = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise ValueError(f"Invalid YAML format in {path}: {e}")
    if not data:
        raise ValueError(f"Empty config file: {path}")
    if not isinstance(data, dict):
        raise ValueError(f"Config file {path} must hold a mapping")
    return data


def load_config_file(
    config_path: Optional[Path] = None, custom_config_path: Optional[Path] = None
) -> ToolConfig:
    """
    Load tool settings from YAML with an optional custom override.

    Args:
        config_path: Path to the default YAML config (default: config/aligned_config.yaml)
        custom_config_path: Optional YAML file whose values override the defaults

    Returns:
        Validated ToolConfig

    Raises:
        FileNotFoundError: If the default config file doesn't exist
        ValueError: If the default config is malformed or a value is out of range
    """
    config_path = config_path or default_config_path()
    if not config_path.exists():
        raise FileNotFoundError(f"Config file not found: {config_path}")
    config = _read_yaml(config_path)

    # Merge with custom config if provided
    if custom_config_path and custom_config_path.exists():
        try:
            config = merge_configs(config, _read_yaml(custom_config_path))
            logger.info(f"Merged custom config from: {custom_config_path}")
        except ValueError as e:
            logger.warning(f"Ignoring custom config {custom_config_path}: {e}")
    elif custom_config_path:
        logger.warning(f"Custom config not found: {custom_config_path}")

    return ToolConfig.from_dict(config)
