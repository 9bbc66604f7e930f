"""Configuration management for the medial axis pipeline."""

from .settings import (
    apply_env_overrides,
    get_default_config,
    load_config,
    load_config_from_dict,
    load_config_from_file,
    save_config_to_file,
    validate_config,
)

__all__ = [
    "apply_env_overrides",
    "get_default_config",
    "load_config",
    "load_config_from_dict",
    "load_config_from_file",
    "save_config_to_file",
    "validate_config",
]
