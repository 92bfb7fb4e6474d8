"""Request/response models for the HTTP control surface."""

from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, ConfigDict


class CredentialsPatch(BaseModel):
    model_config = ConfigDict(extra="forbid")

    token: str = ""
    hub: str = ""
    group: str = ""
    project: str = ""


class ConfigPatch(BaseModel):
    """Partial configuration; only fields present in the request are merged."""

    model_config = ConfigDict(extra="forbid")

    receive_port: Optional[int] = None
    send_port: Optional[int] = None
    target_ip: Optional[str] = None
    remote: Optional[bool] = None
    bind_ip: Optional[str] = None
    credentials: Optional[CredentialsPatch] = None
    max_qubits: Optional[int] = None
    default_shots: Optional[int] = None
    seed: Optional[int] = None
    parallel_jobs: Optional[int] = None
    remote_timeout_s: Optional[float] = None


class StatusResponse(BaseModel):
    state: str
    effective_config: dict[str, Any]
    jobs_done: int
    last_error: Optional[str]
    uptime_s: float


class FieldProblem(BaseModel):
    field: str
    message: str
