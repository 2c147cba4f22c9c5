"""Error types and configuration file helpers."""

import json
from pathlib import Path
from typing import Any

import pydantic
import yaml

from cprsim.model.config import ExperimentConfig


class ValidationError(Exception):
    """Validation error with error code."""

    def __init__(self, code: str, message: str) -> None:
        self.code = code
        self.message = message
        super().__init__(f"{code}: {message}")


class FirstEntryVanishesError(ValidationError):
    """The reference entry needed by the algebraic phase retrieval is (numerically) zero."""

    def __init__(self, message: str) -> None:
        super().__init__("FIRST_ENTRY_VANISHES", message)


def invalid_argument(message: str) -> ValidationError:
    """Build the error raised for bad operation arguments."""
    return ValidationError("INVALID_ARGUMENT", message)


def _format_pydantic_error(error: pydantic.ValidationError) -> str:
    parts = []
    for item in error.errors():
        location = ".".join(str(p) for p in item.get("loc", ())) or "config"
        parts.append(f"{location}: {item.get('msg', 'invalid value')}")
    return "; ".join(parts)


def read_config_document(path: Path) -> dict[str, Any]:
    """Read a key-value config document (YAML, or JSON which YAML also parses)."""
    if not path.exists():
        raise ValidationError("CONFIG_NOT_FOUND", f"Config file not found: {path}")
    with path.open() as f:
        try:
            data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ValidationError("INVALID_CONFIG", f"Cannot parse {path}: {e}") from e
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ValidationError("INVALID_CONFIG", f"{path} must contain a key-value mapping")
    return data


def build_config(data: dict[str, Any]) -> ExperimentConfig:
    """Validate raw settings into an ExperimentConfig, mapping pydantic errors to INVALID_CONFIG."""
    try:
        return ExperimentConfig.model_validate(data)
    except pydantic.ValidationError as e:
        raise ValidationError("INVALID_CONFIG", _format_pydantic_error(e)) from e


def load_config(
    path: Path | None,
    overrides: dict[str, Any] | None = None,
    defaults: ExperimentConfig | None = None,
) -> ExperimentConfig:
    """Load an experiment config: preset defaults, then file values, then flag overrides.

    Args:
        path: Optional YAML/JSON config file
        overrides: Values from command-line flags; None entries are ignored
        defaults: Preset used as the base layer

    Returns:
        Validated ExperimentConfig
    """
    data: dict[str, Any] = defaults.model_dump(mode="json") if defaults is not None else {}
    if path is not None:
        file_data = read_config_document(path)
        solver_data = file_data.pop("solver", None)
        retrieval_data = file_data.pop("retrieval", None)
        data.update(file_data)
        if solver_data:
            data["solver"] = {**data.get("solver", {}), **solver_data}
        if retrieval_data:
            data["retrieval"] = {**data.get("retrieval", {}), **retrieval_data}
        # An explicit grid in the file replaces the preset's other grid flavour
        if "measurements" in file_data and "l_values" not in file_data:
            data["l_values"] = None
        if "l_values" in file_data and "measurements" not in file_data:
            data["measurements"] = None
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key in ("solver", "retrieval"):
            data[key] = {**data.get(key, {}), **value}
            continue
        data[key] = value
        if key == "measurements":
            data["l_values"] = None
        elif key == "l_values":
            data["measurements"] = None
    return build_config(data)


def save_config(config: ExperimentConfig, path: Path) -> Path:
    """Save a config to disk as YAML (or JSON when the suffix is .json)."""
    path.parent.mkdir(parents=True, exist_ok=True)
    data = config.model_dump(mode="json")
    with path.open("w") as f:
        if path.suffix == ".json":
            json.dump(data, f, indent=2)
        else:
            yaml.safe_dump(data, f, sort_keys=False)
    return path
