"""Rate limiting for probe requests."""

import asyncio
import time
from collections import deque
from typing import Deque, Optional

from ..config.settings import settings
from .logger import get_logger

logger = get_logger(__name__)


class AsyncRateLimiter:
    """Sliding-window limiter allowing at most ``requests_per_second`` calls per second."""

    def __init__(self, requests_per_second: Optional[float] = None):
        self.requests_per_second = requests_per_second or settings.rate_limit
        if self.requests_per_second <= 0:
            raise ValueError("requests_per_second must be positive")
        self.window = 1.0
        self.capacity = max(1, int(self.requests_per_second))
        # Below one request per second the window stretches instead.
        if self.requests_per_second < 1:
            self.window = 1.0 / self.requests_per_second
        self.request_times: Deque[float] = deque()
        self._lock: Optional[asyncio.Lock] = None

    async def wait(self) -> None:
        """Wait if issuing a request now would exceed the rate."""
        if self._lock is None:
            self._lock = asyncio.Lock()
        async with self._lock:
            current_time = time.monotonic()

            cutoff_time = current_time - self.window
            while self.request_times and self.request_times[0] <= cutoff_time:
                self.request_times.popleft()

            if len(self.request_times) >= self.capacity:
                oldest_request = self.request_times[0]
                wait_time = self.window - (current_time - oldest_request)
                if wait_time > 0:
                    logger.debug(f"Rate limit reached, waiting {wait_time:.2f} seconds")
                    await asyncio.sleep(wait_time)
                self.request_times.popleft()

            self.request_times.append(time.monotonic())

    def reset(self) -> None:
        """Forget all recorded requests."""
        self.request_times.clear()
