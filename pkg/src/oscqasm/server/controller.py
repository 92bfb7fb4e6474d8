"""Lifecycle controller wrapping the OSC server.

Owns the current configuration, creates/destroys server instances on
start/stop, and attaches the bundled mock remote provider whenever
credentials are configured. All operator surfaces (HTTP control API,
non-headless CLI) drive the server exclusively through this class.
"""

from __future__ import annotations

import threading
from typing import Any, Callable

from .config import Credentials, ServerConfig, config_as_dict, validate_config
from .core import OscQasmServer, ServerState
from .errors import IllegalTransition
from .logbus import LogBus
from .remote import MockProvider, MockProviderService, RemoteProvider

ProviderFactory = Callable[
    [ServerConfig], "tuple[RemoteProvider, Callable[[], None]] | None"
]


class ConfigValidationError(Exception):
    """Carries field-level validation problems."""

    def __init__(self, problems: list[tuple[str, str]]):
        self.problems = problems
        super().__init__("; ".join(f"{f}: {m}" for f, m in problems))


def mock_provider_factory(
    config: ServerConfig,
) -> tuple[RemoteProvider, Callable[[], None]] | None:
    """Spin up the bundled mock provider when credentials are configured."""
    if config.credentials is None:
        return None
    service = MockProviderService(token=config.credentials.token, seed=config.seed)
    base_url = service.start()
    provider = MockProvider(base_url)

    def close() -> None:
        provider.close()
        service.stop()

    return provider, close


class ServerController:
    def __init__(
        self,
        config: ServerConfig | None = None,
        logbus: LogBus | None = None,
        provider_factory: ProviderFactory = mock_provider_factory,
    ):
        self.config = config or ServerConfig()
        self.logbus = logbus or LogBus()
        self.provider_factory = provider_factory
        self._server: OscQasmServer | None = None
        self._provider_close: Callable[[], None] | None = None
        self._last_error: str | None = None
        self._lock = threading.RLock()

    # -- status -----------------------------------------------------------------

    @property
    def state(self) -> ServerState:
        server = self._server
        return server.state if server is not None else ServerState.STOPPED

    @property
    def server(self) -> OscQasmServer | None:
        return self._server

    def get_status(self) -> dict[str, Any]:
        with self._lock:
            server = self._server
            return {
                "state": self.state.value,
                "effective_config": config_as_dict(self.config),
                "jobs_done": server.jobs_done if server is not None else 0,
                "last_error": self._last_error,
                "uptime_s": server.uptime_s() if server is not None else 0.0,
            }

    # -- configuration -------------------------------------------------------------

    def apply_config(self, changes: dict[str, Any]) -> dict[str, Any]:
        """Merge validated changes; only legal while stopped."""
        with self._lock:
            if self.state != ServerState.STOPPED:
                raise IllegalTransition("configuration can only change while stopped")
            candidate = self._merged(changes)
            problems = validate_config(candidate)
            if problems:
                raise ConfigValidationError(problems)
            self.config = candidate
            return self.get_status()

    def _merged(self, changes: dict[str, Any]) -> ServerConfig:
        known = set(ServerConfig.__dataclass_fields__)
        unknown = set(changes) - known
        if unknown:
            raise ConfigValidationError(
                [(name, "unknown configuration field") for name in sorted(unknown)]
            )
        prepared = dict(changes)
        if "credentials" in prepared and isinstance(prepared["credentials"], dict):
            prepared["credentials"] = Credentials(**prepared["credentials"])
        return self.config.replace(**prepared)

    # -- lifecycle -----------------------------------------------------------------

    def start(self) -> dict[str, Any]:
        with self._lock:
            if self.state != ServerState.STOPPED:
                raise IllegalTransition(f"cannot start while {self.state.value}")
            self._teardown_provider()
            provider = None
            made = self.provider_factory(self.config)
            if made is not None:
                provider, self._provider_close = made
            server = OscQasmServer(self.config, logbus=self.logbus, provider=provider)
            self._server = server
            try:
                server.start()
            except Exception as exc:
                self._last_error = server.last_error or str(exc)
                self._teardown_provider()
                return self.get_status()
            self._last_error = None
            return self.get_status()

    def stop(self) -> dict[str, Any]:
        with self._lock:
            if self.state != ServerState.RUNNING:
                raise IllegalTransition(f"cannot stop while {self.state.value}")
            assert self._server is not None
            self._server.stop()
            self._teardown_provider()
            return self.get_status()

    def shutdown(self) -> None:
        """Best-effort teardown regardless of state."""
        with self._lock:
            if self.state == ServerState.RUNNING:
                self.stop()
            else:
                self._teardown_provider()

    def _teardown_provider(self) -> None:
        if self._provider_close is not None:
            self._provider_close()
            self._provider_close = None
