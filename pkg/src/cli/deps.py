"""Shared plumbing for command handlers: parameter access and output dirs."""
import json
from typing import Any, List, Optional, Sequence

from ..core.errors import InvalidArgumentError
from ..schemas.run import RunConfig
from .output import OutputDir


def param(config: RunConfig, name: str, default: Any = ..., kind: type = None) -> Any:
    if name not in config.params or config.params[name] is None:
        if default is ...:
            raise InvalidArgumentError(f"missing parameter '{name}'", command=config.command)
        return default
    value = config.params[name]
    if kind is None:
        return value
    try:
        return kind(value)
    except (TypeError, ValueError):
        raise InvalidArgumentError(f"parameter '{name}' must be {kind.__name__}", value=value)


def float_list(config: RunConfig, name: str, default: Optional[Sequence[float]] = None) -> List[float]:
    raw = param(config, name, default if default is not None else ...)
    if isinstance(raw, str):
        raw = [v for v in raw.split(",") if v.strip()]
    try:
        values = [float(v) for v in raw]
    except (TypeError, ValueError):
        raise InvalidArgumentError(f"parameter '{name}' must be a list of numbers", value=raw)
    if not values:
        raise InvalidArgumentError(f"parameter '{name}' is empty", command=config.command)
    return values


def int_list(config: RunConfig, name: str, default: Optional[Sequence[int]] = None) -> List[int]:
    return [int(v) for v in float_list(config, name, default)]


def tolerance(config: RunConfig, name: str, default: float) -> float:
    return config.tolerances.get(name, default) * config.tolerance_scale


def get_output(config: RunConfig) -> OutputDir:
    return OutputDir(config.out or f"out/{config.command}")


def json_param(config: RunConfig, name: str, default: Any = ...) -> dict:
    """Object parameter given inline in the config or as a JSON string flag."""
    value = param(config, name, default)
    if isinstance(value, str):
        try:
            value = json.loads(value)
        except json.JSONDecodeError as exc:
            raise InvalidArgumentError(f"parameter '{name}' is not valid JSON", error=str(exc))
    if not isinstance(value, dict):
        raise InvalidArgumentError(f"parameter '{name}' must be a JSON object", value=value)
    return value
