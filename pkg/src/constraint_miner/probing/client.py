"""Clients that send probe requests and classify the responses."""

import asyncio
from abc import ABC, abstractmethod
from typing import Any, Dict, Mapping, Optional

import aiohttp

from ..config.settings import settings
from ..mock_api.scenario import Scenario
from ..mock_api.validator import validate_request
from ..utils.logger import get_logger
from .tables import ProbeOutcome

logger = get_logger(__name__)


class ProbeClient(ABC):
    """Sends one JSON body to the endpoint under test."""

    async def __aenter__(self):
        return self

    async def __aexit__(self, exc_type, exc_val, exc_tb):
        await self.close()

    @abstractmethod
    async def send(self, body: Mapping[str, Any]) -> ProbeOutcome:
        """POST ``body`` and classify the answer."""

    async def close(self) -> None:
        pass

    @property
    def target(self) -> str:
        return type(self).__name__


class HttpProbeClient(ProbeClient):
    """Probes a live endpoint over HTTP."""

    def __init__(
        self,
        url: str,
        headers: Optional[Mapping[str, str]] = None,
        timeout: Optional[float] = None,
        auth: Optional[str] = None,
        method: str = "POST",
    ):
        self.url = url
        self.method = method.upper()
        self.timeout = timeout or settings.request_timeout
        self.headers: Dict[str, str] = {
            "Content-Type": "application/json",
            "User-Agent": settings.user_agent,
        }
        self.headers.update(headers or {})
        auth = auth if auth is not None else settings.auth
        if auth:
            self.headers[settings.auth_header] = auth
        self.session: Optional[aiohttp.ClientSession] = None

    @property
    def target(self) -> str:
        return self.url

    async def _session(self) -> aiohttp.ClientSession:
        if self.session is None or self.session.closed:
            self.session = aiohttp.ClientSession(
                timeout=aiohttp.ClientTimeout(total=self.timeout),
                headers=self.headers,
            )
        return self.session

    async def send(self, body: Mapping[str, Any]) -> ProbeOutcome:
        session = await self._session()
        try:
            async with session.request(self.method, self.url, json=dict(body), allow_redirects=False) as response:
                await response.read()
                return ProbeOutcome.from_status(response.status)
        except aiohttp.ClientConnectorError as e:
            logger.debug(f"Connection to {self.url} failed: {e}")
            return ProbeOutcome.error("connect")
        except asyncio.TimeoutError:
            return ProbeOutcome.error("timeout")
        except aiohttp.ClientError as e:
            return ProbeOutcome.error(type(e).__name__)

    async def close(self) -> None:
        if self.session is not None:
            await self.session.close()
            self.session = None


class ScenarioProbeClient(ProbeClient):
    """Answers probes in-process from a mock scenario."""

    def __init__(self, scenario: Scenario):
        self.scenario = scenario

    @property
    def target(self) -> str:
        return f"scenario:{self.scenario.endpoint_path}"

    async def send(self, body: Mapping[str, Any]) -> ProbeOutcome:
        return ProbeOutcome.from_status(validate_request(self.scenario, dict(body)))
