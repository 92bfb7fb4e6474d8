"""OSC server core: configuration, lifecycle, dispatch, remote providers."""

from .backends import BackendDescriptor, BackendLimits, BackendRegistry, LOCAL_SIMULATOR
from .config import (
    Credentials,
    ServerConfig,
    config_as_dict,
    redact_token,
    validate_config,
)
from .core import JobRequest, JobResult, OscQasmServer, ServerState, counts_to_json
from .errors import (
    BadArgType,
    BindFailure,
    ConfigError,
    IllegalTransition,
    MissingQasm,
    ServerError,
    ServerStopped,
    UnknownBackend,
)
from .logbus import LogBus, LogEvent, LogSubscription
from .netutil import detect_primary_ip
from .remote import (
    AuthFailed,
    MockProvider,
    MockProviderService,
    RemoteError,
    RemoteProvider,
    RemoteRejected,
    RemoteTimeout,
    submit_remote,
)

__all__ = [
    "ServerConfig",
    "Credentials",
    "validate_config",
    "config_as_dict",
    "redact_token",
    "OscQasmServer",
    "ServerState",
    "JobRequest",
    "JobResult",
    "counts_to_json",
    "BackendRegistry",
    "BackendDescriptor",
    "BackendLimits",
    "LOCAL_SIMULATOR",
    "LogBus",
    "LogEvent",
    "LogSubscription",
    "detect_primary_ip",
    "RemoteProvider",
    "MockProvider",
    "MockProviderService",
    "submit_remote",
    "RemoteError",
    "AuthFailed",
    "RemoteTimeout",
    "RemoteRejected",
    "ServerError",
    "ConfigError",
    "BindFailure",
    "IllegalTransition",
    "MissingQasm",
    "BadArgType",
    "UnknownBackend",
    "ServerStopped",
]
