"""Network interface helpers."""

from __future__ import annotations

import ipaddress
import socket


def detect_primary_ip() -> str | None:
    """Best-effort address of the main network adapter.

    Opens a UDP socket "toward" a public address and reads the local
    endpoint the kernel picked; UDP connect() only consults the routing
    table, no packet is sent. Falls back to hostname resolution.
    """
    try:
        probe = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
        try:
            probe.connect(("8.8.8.8", 80))
            ip = probe.getsockname()[0]
        finally:
            probe.close()
        if not ipaddress.ip_address(ip).is_loopback:
            return ip
    except OSError:
        pass
    try:
        ip = socket.gethostbyname(socket.gethostname())
        if not ipaddress.ip_address(ip).is_loopback:
            return ip
    except OSError:
        pass
    return None
