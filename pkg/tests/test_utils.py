"""Tests for settings, rate limiting and the scenario probe client."""

import pytest

from constraint_miner.config.settings import Settings
from constraint_miner.constraints import parse_dsl
from constraint_miner.mock_api import Scenario
from constraint_miner.probing import ResultKind, ScenarioProbeClient
from constraint_miner.utils import AsyncRateLimiter


class TestSettings:
    def test_environment_overrides(self, monkeypatch):
        monkeypatch.setenv("CONSTRAINTMINER_RATE_LIMIT", "7")
        monkeypatch.setenv("CONSTRAINTMINER_OUTPUT_DIR", "results")
        configured = Settings()
        assert configured.rate_limit == 7.0
        assert configured.output_path.name == "results"

    def test_defaults(self, monkeypatch):
        monkeypatch.delenv("CONSTRAINTMINER_MAX_DEPTH", raising=False)
        assert Settings(_env_file=None).max_depth == 15


class TestRateLimiter:
    def test_rejects_negative_rate(self):
        with pytest.raises(ValueError):
            AsyncRateLimiter(-1)

    def test_slow_rates_stretch_the_window(self):
        limiter = AsyncRateLimiter(0.5)
        assert limiter.capacity == 1
        assert limiter.window == 2.0

    @pytest.mark.asyncio
    async def test_waits_once_capacity_is_used(self, mocker):
        sleep = mocker.patch("constraint_miner.utils.rate_limiter.asyncio.sleep", new=mocker.AsyncMock())
        limiter = AsyncRateLimiter(2)
        await limiter.wait()
        await limiter.wait()
        sleep.assert_not_called()
        await limiter.wait()
        sleep.assert_awaited_once()
        assert len(limiter.request_times) == 2

    @pytest.mark.asyncio
    async def test_reset(self):
        limiter = AsyncRateLimiter(100)
        await limiter.wait()
        limiter.reset()
        assert not limiter.request_times


class TestScenarioClient:
    @pytest.mark.asyncio
    async def test_send(self, payment_spec):
        scenario = Scenario(
            endpoint_path="/payments", spec=payment_spec, constraints=parse_dsl("requires(card, card.cvc)")
        )
        async with ScenarioProbeClient(scenario) as client:
            accepted = await client.send({"card": {"cvc": "737"}})
            rejected = await client.send({"card": {}})
        assert accepted.kind is ResultKind.SUCCESS
        assert rejected.kind is ResultKind.FAILURE
        assert rejected.status == 422
