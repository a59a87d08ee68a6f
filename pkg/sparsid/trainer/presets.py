"""Run configuration: presets, flat JSON files and flag overrides."""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Union

from sparsid.errors import ConfigError
from . import config
from .models import TrainConfig

logger = logging.getLogger(__name__)


def load_config_file(path: Union[str, Path]) -> Dict[str, Any]:
    """Read a flat JSON object of TrainConfig keys."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        values = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: invalid JSON at line {e.lineno}: {e.msg}") from e
    if not isinstance(values, dict):
        raise ConfigError(f"{path}: expected a flat JSON object of config keys")
    nested = [k for k, v in values.items() if isinstance(v, dict)]
    if nested:
        raise ConfigError(f"{path}: nested sections are not supported ({', '.join(nested)})")
    return values


def resolve_config(
    preset: Optional[str] = None,
    path: Optional[Union[str, Path]] = None,
    overrides: Optional[Dict[str, Any]] = None,
    base: Optional[Dict[str, Any]] = None,
) -> TrainConfig:
    """Merge base < preset < file < overrides and validate.

    ``None`` overrides are ignored so unset CLI flags do not mask file values.
    Raises pydantic ValidationError naming any missing or unknown key.
    """
    values: Dict[str, Any] = dict(base or {})
    if preset is not None:
        if preset not in config.PRESETS:
            raise ConfigError(f"unknown preset '{preset}' (choose from {', '.join(config.PRESETS)})")
        values.update(config.PRESETS[preset])
    if path is not None:
        values.update(load_config_file(path))
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    cfg = TrainConfig.model_validate(values)
    logger.debug(f"Resolved config: {cfg.snapshot()}")
    return cfg
