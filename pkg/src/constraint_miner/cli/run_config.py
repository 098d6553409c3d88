"""Options shared by the pipeline commands."""

from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from ..config.settings import settings
from ..exceptions import ConfigError

COMMANDS = ("mine-docs", "probe", "analyze-code", "combine", "evaluate", "serve-mock", "estimate-budget")


def is_url(target: str) -> bool:
    return target.startswith(("http://", "https://"))


class RunConfig(BaseModel):
    """Everything a command may read; ``validate_for`` checks what one command needs."""

    model_config = ConfigDict(extra="forbid")

    spec: Optional[Path] = None
    src: Optional[Path] = None
    config: Optional[Path] = None
    truth: Optional[Path] = None
    target: Optional[str] = None
    out: Path = Field(default_factory=lambda: settings.output_path)
    rate: float = Field(default_factory=lambda: settings.rate_limit, gt=0)
    freq_factor: float = Field(default_factory=lambda: settings.frequency_factor, gt=0)
    max_depth: Optional[int] = Field(None, ge=1)
    params: Optional[int] = Field(None, ge=1)
    code: Optional[Path] = None
    doc: Optional[Path] = None
    candidates: Optional[Path] = None
    port: int = Field(8080, ge=1, le=65535)

    def validate_for(self, command: str) -> "RunConfig":
        if command not in COMMANDS:
            raise ConfigError(f"unknown command '{command}'")
        if command in ("mine-docs", "probe", "analyze-code") and self.spec is None and self.src is None:
            raise ConfigError(f"{command}: give --spec or --src")
        if command in ("mine-docs", "probe"):
            self._need("spec", command, "the endpoint's OAS file")
        if command == "probe":
            self._need("target", command, "an http(s) URL or a mock scenario JSON file")
            if not is_url(self.target):
                self._exists(Path(self.target), "--target")
        if command == "analyze-code":
            self._need("src", command, "the directory with the endpoint's source files")
            self._need("config", command, "the analysis config JSON")
            if not self.src.is_dir():
                raise ConfigError(f"--src is not a directory: {self.src}")
        if command == "combine":
            self._need("code", command, "the code analysis constraints")
            self._need("doc", command, "the documentation constraints")
        if command == "evaluate":
            self._need("truth", command, "the ground truth constraint file")
            if self.code is None and self.doc is None:
                raise ConfigError("evaluate: give --code and/or --doc to score")
        if command == "serve-mock":
            self._need("target", command, "the mock scenario JSON file")
            if is_url(self.target):
                raise ConfigError("serve-mock: --target must be a scenario file, not a URL")
        if command == "estimate-budget" and self.params is None and self.spec is None:
            raise ConfigError("estimate-budget: give --params or --spec")

        for option in ("spec", "config", "truth", "code", "doc", "candidates"):
            value = getattr(self, option)
            if value is not None:
                self._exists(value, f"--{option}")
        return self

    def _need(self, option: str, command: str, what: str) -> None:
        if getattr(self, option) is None:
            raise ConfigError(f"{command}: --{option.replace('_', '-')} is required ({what})")

    @staticmethod
    def _exists(path: Path, flag: str) -> None:
        if not path.exists():
            raise ConfigError(f"{flag}: file not found: {path}")
