"""Configuration settings for the constraint miner."""

from pathlib import Path
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    # Logging
    log_level: str = "INFO"
    log_file: Optional[str] = None

    # Documentation analysis
    frequency_factor: float = Field(2.0, gt=0)

    # Probing
    rate_limit: float = Field(5.0, gt=0)
    request_timeout: float = 30.0
    error_abort_ratio: float = 0.25
    auth: Optional[str] = None
    auth_header: str = "Authorization"
    user_agent: str = "constraint-miner/1.0"

    # Mock API
    failure_status: int = 422

    # Code analysis
    max_depth: int = Field(15, ge=1)

    output_dir: str = "out"

    @property
    def output_path(self) -> Path:
        return Path(self.output_dir)

    model_config = SettingsConfigDict(
        env_prefix="CONSTRAINTMINER_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )


# Global settings instance
settings = Settings()
