"""Configuration module for the constraint miner."""

from .settings import Settings, settings
from .files import AnalysisConfig, ProbeConfig, ScenarioConfig, load_json_config

__all__ = [
    "Settings",
    "settings",
    "AnalysisConfig",
    "ProbeConfig",
    "ScenarioConfig",
    "load_json_config",
]
