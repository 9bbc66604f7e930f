"""Configuration loading and validation."""

import copy
import json
import logging
import os
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Tuple, Union

import yaml
from dotenv import load_dotenv

from ..models.config import PipelineConfig


logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

CONFIG_LOCATIONS = (
    "config.yaml",
    "config.yml",
    "config/config.yaml",
    "config/config.yml",
    "~/.mattopo/config.yaml",
)

# ENV_NAME -> (section or None for top level, key, converter)
ENV_OVERRIDES: Dict[str, Tuple[Optional[str], str, Callable[[str], Any]]] = {
    "MATTOPO_THREADS": ("rpd", "threads", int),
    "MATTOPO_SEED": (None, "seed", int),
    "MATTOPO_MAX_ROUNDS": (None, "max_rounds", int),
    "MATTOPO_DELTA_EPS": ("geometry", "delta_eps", float),
    "MATTOPO_OUT_DIR": ("output", "out_dir", str),
    "MATTOPO_LOG_LEVEL": (None, "log_level", lambda x: x.upper()),
}


def load_config(config_path: Optional[PathLike] = None) -> PipelineConfig:
    """Load configuration from a file, else defaults, with environment overrides."""
    load_dotenv()
    if config_path:
        return load_config_from_file(config_path)

    for location in (os.getenv("MATTOPO_CONFIG"),) + CONFIG_LOCATIONS:
        if location and Path(location).expanduser().exists():
            logger.info(f"Loading configuration from {location}")
            return load_config_from_file(Path(location).expanduser())

    logger.info("No configuration file found, using defaults with environment overrides")
    return load_config_from_dict(apply_env_overrides({}))


def load_config_from_file(config_path: PathLike) -> PipelineConfig:
    """Load configuration from a YAML or JSON file."""
    config_path = Path(config_path)
    if not config_path.exists():
        raise FileNotFoundError(f"Configuration file not found: {config_path}")

    try:
        with open(config_path, "r", encoding="utf-8") as f:
            if config_path.suffix.lower() in (".yaml", ".yml"):
                data = yaml.safe_load(f) or {}
            elif config_path.suffix.lower() == ".json":
                data = json.load(f)
            else:
                raise ValueError(f"Unsupported configuration file format: {config_path.suffix}")
        if not isinstance(data, dict):
            raise ValueError(f"Configuration root must be a mapping, got {type(data).__name__}")
        return load_config_from_dict(apply_env_overrides(data))
    except Exception as e:
        logger.error(f"Failed to load configuration from {config_path}: {e}")
        raise


def load_config_from_dict(data: Dict[str, Any]) -> PipelineConfig:
    """Load configuration from a dictionary."""
    try:
        config = PipelineConfig.from_dict(data)
        validate_config(config)
        return config
    except Exception as e:
        logger.error(f"Failed to create configuration from dictionary: {e}")
        raise


def validate_config(config: PipelineConfig) -> None:
    """Cross-section checks; each section validates itself on construction."""
    if config.mesh.input_path is not None and config.mesh.features_path == config.mesh.input_path:
        raise ValueError("Feature file and mesh file must differ")
    if config.geometry.max_insert_per_round > config.geometry.target_samples:
        logger.warning(
            f"max_insert_per_round ({config.geometry.max_insert_per_round}) exceeds "
            f"target_samples ({config.geometry.target_samples})"
        )
    logger.debug("Configuration validation passed")


def apply_env_overrides(data: Dict[str, Any]) -> Dict[str, Any]:
    """Apply MATTOPO_* environment variables on top of ``data``.

    Values that do not convert are logged and ignored.
    """
    config_data = copy.deepcopy(data)
    for env_var, (section, key, converter) in ENV_OVERRIDES.items():
        env_value = os.getenv(env_var)
        if env_value is None:
            continue
        try:
            value = converter(env_value)
        except ValueError as e:
            logger.warning(f"Invalid value for {env_var}: {env_value} ({e})")
            continue
        target = config_data if section is None else config_data.setdefault(section, {})
        target[key] = value
        logger.debug(f"{env_var} overrides {section + '.' if section else ''}{key}")
    return config_data


def get_default_config() -> PipelineConfig:
    """Get default configuration."""
    return PipelineConfig()


def save_config_to_file(config: PipelineConfig, file_path: PathLike, format: str = "yaml") -> None:
    """Save configuration to a file."""
    config_dict = config.to_dict()

    file_path = Path(file_path)
    file_path.parent.mkdir(parents=True, exist_ok=True)

    with open(file_path, "w", encoding="utf-8") as f:
        if format.lower() in ("yaml", "yml"):
            yaml.safe_dump(config_dict, f, default_flow_style=False, indent=2, sort_keys=False)
        elif format.lower() == "json":
            json.dump(config_dict, f, indent=2)
        else:
            raise ValueError(f"Unsupported format: {format}")

    logger.info(f"Configuration saved to {file_path}")
