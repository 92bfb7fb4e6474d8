import socket

import pytest

BELL_SOURCE = """\
OPENQASM 2.0;
include "qelib1.inc";
qreg q[2];
creg c[2];
h q[0];
cx q[0],q[1];
measure q[0] -> c[0];
measure q[1] -> c[1];
"""


@pytest.fixture
def bell_source() -> str:
    return BELL_SOURCE


def free_udp_port(host: str = "127.0.0.1") -> int:
    sock = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
    sock.bind((host, 0))
    port = sock.getsockname()[1]
    sock.close()
    return port


@pytest.fixture
def udp_port() -> int:
    return free_udp_port()


class ReplyListener:
    """Bound UDP socket collecting server replies during a test."""

    def __init__(self, host: str = "127.0.0.1", port: int = 0):
        self.sock = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
        self.sock.bind((host, port))
        self.addr = self.sock.getsockname()[:2]

    @property
    def port(self) -> int:
        return self.addr[1]

    def recv(self, timeout: float = 5.0) -> bytes:
        self.sock.settimeout(timeout)
        data, _ = self.sock.recvfrom(65_535)
        return data

    def close(self) -> None:
        self.sock.close()


@pytest.fixture
def reply_listener():
    listener = ReplyListener()
    yield listener
    listener.close()
