"""Server configuration and its validation rules.

`validate_config` returns field-level problems rather than raising so
both the CLI and the HTTP control surface can report them their own way.
"""

from __future__ import annotations

import dataclasses
import ipaddress
from dataclasses import dataclass
from typing import Any

from ..sim.runner import MAX_SHOTS

DEFAULT_RECEIVE_PORT = 1416
DEFAULT_SEND_PORT = 1417
DEFAULT_TARGET_IP = "127.0.0.1"
DEFAULT_SHOTS = 1024

# 2^24 amplitudes = 256 MiB of complex doubles; above that a single job
# could take down a small machine.
MAX_SUPPORTED_QUBITS = 24


@dataclass(frozen=True)
class Credentials:
    token: str = ""
    hub: str = ""
    group: str = ""
    project: str = ""


@dataclass
class ServerConfig:
    receive_port: int = DEFAULT_RECEIVE_PORT
    send_port: int = DEFAULT_SEND_PORT
    target_ip: str = DEFAULT_TARGET_IP
    remote: bool = False
    bind_ip: str | None = None
    credentials: Credentials | None = None
    max_qubits: int = 20
    default_shots: int = DEFAULT_SHOTS
    seed: int | None = None
    parallel_jobs: int = 1
    remote_timeout_s: float = 300.0

    def replace(self, **changes: Any) -> "ServerConfig":
        return dataclasses.replace(self, **changes)


def redact_token(token: str) -> str:
    """Keep only the last four characters of a credential token."""
    if len(token) > 4:
        return "****" + token[-4:]
    return "****"


def config_as_dict(config: ServerConfig) -> dict[str, Any]:
    """Serializable view of the config with the token redacted."""
    out: dict[str, Any] = dataclasses.asdict(config)
    if config.credentials is not None:
        out["credentials"]["token"] = redact_token(config.credentials.token)
    return out


def _is_ip(text: str) -> bool:
    try:
        ipaddress.ip_address(text)
    except ValueError:
        return False
    return True


def _is_loopback(text: str) -> bool:
    try:
        return ipaddress.ip_address(text).is_loopback
    except ValueError:
        return False


def validate_config(config: ServerConfig) -> list[tuple[str, str]]:
    """Return (field, message) pairs; empty when the config is usable."""
    problems: list[tuple[str, str]] = []
    for field in ("receive_port", "send_port"):
        port = getattr(config, field)
        if not isinstance(port, int) or not 1 <= port <= 65535:
            problems.append((field, "port out of range (1..65535)"))
    if not _is_ip(config.target_ip):
        problems.append(("target_ip", f"invalid IP address: {config.target_ip!r}"))
    elif (
        config.receive_port == config.send_port
        and _is_loopback(config.target_ip)
        and isinstance(config.receive_port, int)
    ):
        problems.append(
            ("send_port", "send port must differ from receive port when the target is loopback")
        )
    if config.bind_ip is not None:
        if not config.remote:
            problems.append(("bind_ip", "an explicit bind address requires remote mode"))
        elif not _is_ip(config.bind_ip):
            problems.append(("bind_ip", f"invalid IP address: {config.bind_ip!r}"))
    if config.credentials is not None and not config.credentials.token:
        problems.append(("credentials", "token must be non-empty"))
    if not 1 <= config.max_qubits <= MAX_SUPPORTED_QUBITS:
        problems.append(("max_qubits", f"must be in 1..{MAX_SUPPORTED_QUBITS}"))
    if not 1 <= config.default_shots <= MAX_SHOTS:
        problems.append(("default_shots", f"must be in 1..{MAX_SHOTS}"))
    if config.seed is not None and not 0 <= config.seed < 2**64:
        problems.append(("seed", "seed must fit in an unsigned 64-bit integer"))
    if not 1 <= config.parallel_jobs <= 32:
        problems.append(("parallel_jobs", "must be in 1..32"))
    if config.remote_timeout_s <= 0:
        problems.append(("remote_timeout_s", "must be positive"))
    return problems
