"""FastAPI service enforcing a scenario's constraints."""

import asyncio
import threading
import time
from typing import Optional

import uvicorn
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..utils.logger import get_logger
from .scenario import Scenario
from .validator import OK_STATUS, validate_raw

logger = get_logger(__name__)


def create_app(scenario: Scenario) -> FastAPI:
    """Create the mock application for ``scenario``."""
    app = FastAPI(
        title="Constraint Miner Mock API",
        description="Deterministic endpoint that rejects requests violating declared constraints",
        version="1.0.0",
    )

    @app.get("/health")
    async def health_check():
        """Health check with the served scenario."""
        return JSONResponse(content={"status": "healthy", **scenario.describe()})

    async def handle(request: Request):
        raw = await request.body()
        status = validate_raw(scenario, raw)
        outcome = "accepted" if status == OK_STATUS else "rejected"
        logger.debug(f"{request.method} {scenario.endpoint_path} -> {status}")
        return JSONResponse(status_code=status, content={"status": outcome})

    app.add_api_route(scenario.endpoint_path, handle, methods=[scenario.spec.method])
    return app


async def run_server(scenario: Scenario, host: str = "127.0.0.1", port: int = 8080) -> None:
    """Serve ``scenario`` until interrupted."""
    config = uvicorn.Config(app=create_app(scenario), host=host, port=port, log_level="warning")
    server = uvicorn.Server(config)
    logger.info(f"Serving {scenario.spec.method} {scenario.endpoint_path} on http://{host}:{port}")
    try:
        await server.serve()
    except Exception as e:
        logger.error(f"Server error: {e}")
        raise


def serve(scenario: Scenario, host: str = "127.0.0.1", port: int = 8080) -> None:
    """Run the server synchronously."""
    asyncio.run(run_server(scenario, host, port))


class BackgroundServer:
    """Runs the mock service in a daemon thread, e.g. for end-to-end probing."""

    def __init__(self, scenario: Scenario, host: str = "127.0.0.1", port: int = 8080):
        self.scenario = scenario
        self.host = host
        self.port = port
        config = uvicorn.Config(app=create_app(scenario), host=host, port=port, log_level="warning")
        self.server = uvicorn.Server(config)
        self.thread: Optional[threading.Thread] = None

    @property
    def url(self) -> str:
        return f"http://{self.host}:{self.port}{self.scenario.endpoint_path}"

    def start(self, timeout: float = 10.0) -> "BackgroundServer":
        self.thread = threading.Thread(target=self.server.run, daemon=True)
        self.thread.start()
        deadline = time.monotonic() + timeout
        while not self.server.started:
            if time.monotonic() > deadline or not self.thread.is_alive():
                raise RuntimeError(f"mock server did not start on port {self.port}")
            time.sleep(0.05)
        return self

    def stop(self) -> None:
        self.server.should_exit = True
        if self.thread is not None:
            self.thread.join(timeout=10)

    def __enter__(self) -> "BackgroundServer":
        return self.start()

    def __exit__(self, exc_type, exc_val, exc_tb) -> None:
        self.stop()
