"""Utilities: logging and configuration loading."""

from aligned_drawing.utils.logger import Colors, logger
from aligned_drawing.utils.workflow_utils import get_project_root, load_config_file, merge_configs

__all__ = [
    "Colors",
    "logger",
    "get_project_root",
    "load_config_file",
    "merge_configs",
]
