"""Named execution targets a job can be dispatched to."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

from .errors import UnknownBackend

if TYPE_CHECKING:
    from .remote import RemoteProvider

LOCAL_SIMULATOR = "qasm_simulator"


@dataclass(frozen=True)
class BackendLimits:
    max_qubits: int
    max_shots: int


@dataclass(frozen=True)
class BackendDescriptor:
    name: str
    kind: str  # 'local_simulator' | 'remote'
    limits: BackendLimits


class BackendRegistry:
    """Name -> descriptor map; always contains the local simulator."""

    def __init__(self) -> None:
        self._entries: dict[str, tuple[BackendDescriptor, "RemoteProvider | None"]] = {}

    def register_local(self, name: str, limits: BackendLimits) -> None:
        self._entries[name] = (BackendDescriptor(name, "local_simulator", limits), None)

    def register_remote(self, provider: "RemoteProvider", limits: BackendLimits) -> None:
        for name in provider.backend_names():
            self._entries[name] = (BackendDescriptor(name, "remote", limits), provider)

    def names(self) -> list[str]:
        return sorted(self._entries)

    def lookup(self, name: str) -> tuple[BackendDescriptor, "RemoteProvider | None"]:
        try:
            return self._entries[name]
        except KeyError:
            raise UnknownBackend(
                f"unknown backend {name!r}; available: {', '.join(self.names())}"
            ) from None
