"""File-based configuration models (analysis, probing, mock scenarios)."""

import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Type, TypeVar

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from ..exceptions import ConfigError

DEFAULT_COMMON_METHODS: Dict[str, str] = {
    "equals": "eq",
    "length": "len",
    "size": "len",
    "isEmpty": "empty",
    "contains": "in",
    "startsWith": "prefix",
}

ConfigT = TypeVar("ConfigT", bound=BaseModel)


class AnalysisConfig(BaseModel):
    """Static analysis configuration for one endpoint."""

    model_config = ConfigDict(populate_by_name=True, extra="forbid")

    controllers: List[str]
    request_models: List[str] = Field(alias="requestModels")
    root_model: Optional[str] = Field(None, alias="rootModel")
    invalid_state_patterns: List[str] = Field(
        default_factory=lambda: ["addError"], alias="invalidStatePatterns"
    )
    max_depth: int = Field(15, alias="maxDepth", ge=1)
    common_methods: Dict[str, str] = Field(
        default_factory=lambda: dict(DEFAULT_COMMON_METHODS), alias="commonMethods"
    )
    endpoint: Optional[str] = None

    @field_validator("controllers")
    @classmethod
    def _qualified_controllers(cls, value: List[str]) -> List[str]:
        if not value:
            raise ValueError("at least one controller method is required")
        for name in value:
            if name.count(".") != 1:
                raise ValueError(f"controller '{name}' must be written as Class.method")
        return value

    @field_validator("request_models")
    @classmethod
    def _non_empty_models(cls, value: List[str]) -> List[str]:
        if not value:
            raise ValueError("at least one request model class is required")
        return value

    @field_validator("common_methods")
    @classmethod
    def _merge_defaults(cls, value: Dict[str, str]) -> Dict[str, str]:
        merged = dict(DEFAULT_COMMON_METHODS)
        merged.update(value)
        return merged

    @property
    def root_model_name(self) -> str:
        return self.root_model or self.request_models[0]


class ProbeConfig(BaseModel):
    """Base request and transport settings for probing one endpoint."""

    model_config = ConfigDict(populate_by_name=True, extra="forbid")

    overrides: Dict[str, Any] = Field(default_factory=dict)
    extra_paths: List[str] = Field(default_factory=list, alias="extraPaths")
    candidates: Optional[List[Dict[str, Any]]] = None
    method: Optional[str] = None
    headers: Dict[str, str] = Field(default_factory=dict)


class ScenarioConfig(BaseModel):
    """Mock API scenario file: a spec, a ground-truth constraint file and a status."""

    model_config = ConfigDict(populate_by_name=True, extra="forbid")

    spec: Path
    constraints: Path
    failure_status: int = Field(422, alias="failureStatus", ge=400, le=599)
    endpoint_path: Optional[str] = Field(None, alias="endpointPath")


def load_json_config(path: Path, model: Type[ConfigT]) -> ConfigT:
    """Load a JSON config file into ``model``, resolving relative paths against the file."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: invalid JSON ({e})") from e
    try:
        config = model.model_validate(raw)
    except ValidationError as e:
        raise ConfigError(f"{path}: {e}") from e

    base = path.parent
    for name, value in list(config.__dict__.items()):
        if isinstance(value, Path) and not value.is_absolute():
            setattr(config, name, base / value)
    return config
