"""Server-level error types.

Each carries a short `code` used as the prefix of `/error` reply payloads
("code: message").
"""


class ServerError(Exception):
    code = "ServerError"


class ConfigError(ServerError):
    code = "ConfigError"


class BindFailure(ServerError):
    code = "BindFailure"


class IllegalTransition(ServerError):
    """Lifecycle operation not valid in the current state."""

    code = "IllegalTransition"


class MissingQasm(ServerError):
    code = "MissingQasm"


class BadArgType(ServerError):
    code = "BadArgType"


class UnknownBackend(ServerError):
    code = "UnknownBackend"


class ServerStopped(ServerError):
    """Job was queued but the server shut down before running it."""

    code = "ServerStopped"
