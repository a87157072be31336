"""Configuration management for metric-graph-ops.

Stores defaults in ~/.config/metric-graph-ops/config.toml, or wherever the
METRIC_GRAPH_OPS_CONFIG environment variable points.
"""

from __future__ import annotations

import logging
import os
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any

import tomli_w

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

logger = logging.getLogger(__name__)

CONFIG_ENV_VAR = "METRIC_GRAPH_OPS_CONFIG"
CONFIG_DIR = Path.home() / ".config" / "metric-graph-ops"
CONFIG_FILE = CONFIG_DIR / "config.toml"


@dataclass
class NumericsConfig:
    """Default run parameters (CLI flags override)."""

    grid_size: int = 256
    bands: int = 3
    tau_max: float = 2.0
    seed: int = 42
    random_functions: int = 50


@dataclass
class ToleranceConfig:
    """Pass thresholds of the verification checks."""

    # discrete
    eigen_residual: float = 1e-10
    eigen_orthonormality: float = 1e-10
    transition_self_adjoint: float = 1e-12
    reconstruction: float = 1e-10
    extremal_values: float = 1e-9
    # continuous spectrum
    kappa_inversion: float = 1e-12
    source_p_value: float = 1e-12
    unitarity: float = 1e-6
    cross_orthogonality: float = 1e-6
    normalization: float = 1e-8
    vertex_conditions: float = 1e-10
    second_derivative: float = 1e-10
    orientation: float = 1e-10
    count_mismatch: float = 0.0
    # averaging
    averaging_constant: float = 1e-12
    averaging_identity: float = 1e-3
    averaging_self_adjoint: float = 1e-3
    averaging_bound: float = 1e-3
    spectrum_match: float = 1e-9
    # d'Alembert
    dalembert_eigen: float = 1e-9
    functional_identity: float = 1e-10
    reflection: float = 1e-12
    symmetry: float = 0.0
    shift_bound: float = 10.0
    # wave
    wave_velocity: float = 2e-3
    wave_constant_velocity: float = 1e-6
    wave_consistency: float = 1e-3
    wave_order: float = 0.4


@dataclass
class OutputConfig:
    """Artifact settings."""

    wave_frames_per_unit: int = 16


@dataclass
class LoggingConfig:
    """Diagnostics settings."""

    level: str = "INFO"
    log_to_file: bool = False
    log_dir: str = "logs"


@dataclass
class AppConfig:
    """Root configuration object."""

    numerics: NumericsConfig = field(default_factory=NumericsConfig)
    tolerances: ToleranceConfig = field(default_factory=ToleranceConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    logging: LoggingConfig = field(default_factory=LoggingConfig)


_NESTED_TYPES: dict[str, type] = {
    "numerics": NumericsConfig,
    "tolerances": ToleranceConfig,
    "output": OutputConfig,
    "logging": LoggingConfig,
}


def config_path(path: str | Path | None = None) -> Path:
    """Explicit path, else $METRIC_GRAPH_OPS_CONFIG, else the per-user default."""
    if path is not None:
        return Path(path)
    env = os.environ.get(CONFIG_ENV_VAR)
    return Path(env) if env else CONFIG_FILE


def _dataclass_from_dict(cls: type, data: dict[str, Any]) -> Any:
    """Recursively create a dataclass instance from a dict, ignoring unknown keys."""
    valid_fields = {f.name for f in fields(cls)}
    kwargs: dict[str, Any] = {}
    for key, value in data.items():
        if key not in valid_fields:
            logger.debug(f"Ignoring unknown config key {key!r}")
            continue
        if key in _NESTED_TYPES and isinstance(value, dict):
            kwargs[key] = _dataclass_from_dict(_NESTED_TYPES[key], value)
        else:
            kwargs[key] = value
    return cls(**kwargs)


def _dataclass_to_dict(obj: Any) -> dict[str, Any]:
    """Recursively convert a dataclass to a dict."""
    result: dict[str, Any] = {}
    for f in fields(obj):
        value = getattr(obj, f.name)
        if hasattr(value, "__dataclass_fields__"):
            result[f.name] = _dataclass_to_dict(value)
        else:
            result[f.name] = value
    return result


def config_to_toml(config: AppConfig) -> str:
    return tomli_w.dumps(_dataclass_to_dict(config))


def load_config(path: str | Path | None = None) -> AppConfig:
    """Load config from disk, returning defaults if the file is missing or corrupt."""
    target = config_path(path)
    if not target.exists():
        return AppConfig()

    try:
        with open(target, "rb") as f:
            data = tomllib.load(f)
        return _dataclass_from_dict(AppConfig, data)
    except (OSError, tomllib.TOMLDecodeError, TypeError) as e:
        logger.warning(f"Ignoring unreadable config {target}: {e}")
        return AppConfig()


def save_config(config: AppConfig, path: str | Path | None = None) -> Path:
    """Save config to disk."""
    target = config_path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with open(target, "wb") as f:
        tomli_w.dump(_dataclass_to_dict(config), f)
    return target


def reset_config(path: str | Path | None = None) -> AppConfig:
    """Reset config to defaults."""
    config = AppConfig()
    save_config(config, path)
    return config
