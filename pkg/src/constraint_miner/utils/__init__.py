"""Utility modules for the constraint miner."""

from .logger import get_logger
from .rate_limiter import AsyncRateLimiter

__all__ = ["get_logger", "AsyncRateLimiter"]
