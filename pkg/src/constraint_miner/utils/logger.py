"""Logging configuration for the constraint miner."""

import sys
from pathlib import Path
from typing import Optional

from loguru import logger

from ..config.settings import settings

_configured_level: Optional[str] = None


def configure_logging(level: Optional[str] = None) -> None:
    """(Re)install the console and optional file sinks."""
    global _configured_level

    level = (level or settings.log_level).upper()
    logger.remove()
    logger.configure(extra={"component": "constraint_miner"})

    logger.add(
        sys.stderr,
        level=level,
        format="<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | <cyan>{extra[component]}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>",
        colorize=True,
    )

    if settings.log_file:
        log_file = Path(settings.log_file)
        log_file.parent.mkdir(parents=True, exist_ok=True)
        logger.add(
            log_file,
            level=level,
            format="{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {extra[component]}:{function}:{line} - {message}",
            rotation="10 MB",
            retention="30 days",
            compression="zip",
        )

    _configured_level = level


def get_logger(name: str = "constraint_miner"):
    """Get configured logger instance."""
    if _configured_level is None:
        configure_logging()
    return logger.bind(component=name)
