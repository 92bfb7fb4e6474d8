"""Command-line entry point.

Server form (defaults match the operator panel):

    osc-qasm [receive_port] [send_port] [target_ip] [--headless] [--remote [IP]]
             [--token T] [--hub H] [--group G] [--project P]
             [--seed N] [--max-qubits N] [--control-port N]

``--headless`` boots the OSC server immediately; without it the HTTP
control surface starts and waits for the dashboard's start command.

Client form, a minimal stand-in for the music-software clients:

    osc-qasm send --file bell.qasm [--host IP] [--rport N] [--lport N]
             [--shots N] [--backend NAME] [--timeout S]

Exit codes: 0 counts received, 1 error reply received, 2 usage problem,
3 timeout waiting for a reply. OSCQASM_TOKEN is honored when --token is
not given.
"""

from __future__ import annotations

import argparse
import importlib.resources
import os
import socket
import sys
import time
from datetime import datetime
from pathlib import Path

from . import __version__, osc
from .server.config import (
    DEFAULT_RECEIVE_PORT,
    DEFAULT_SEND_PORT,
    DEFAULT_SHOTS,
    DEFAULT_TARGET_IP,
    Credentials,
    ServerConfig,
    validate_config,
)
from .server.controller import ServerController
from .server.logbus import LogBus, LogEvent

EXIT_OK = 0
EXIT_ERROR_REPLY = 1
EXIT_USAGE = 2
EXIT_TIMEOUT = 3


def build_server_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="osc-qasm",
        description="OSC server that runs OpenQASM 2.0 circuits and replies with counts.",
        epilog=(
            "subcommand: 'osc-qasm send --file PROGRAM.qasm' submits a circuit to a "
            "running server and prints the reply (see 'osc-qasm send --help')."
        ),
    )
    parser.add_argument(
        "receive_port",
        nargs="?",
        type=int,
        default=DEFAULT_RECEIVE_PORT,
        help=f"UDP port to listen on (default {DEFAULT_RECEIVE_PORT})",
    )
    parser.add_argument(
        "send_port",
        nargs="?",
        type=int,
        default=DEFAULT_SEND_PORT,
        help=f"UDP port replies are sent to (default {DEFAULT_SEND_PORT})",
    )
    parser.add_argument(
        "target_ip",
        nargs="?",
        default=DEFAULT_TARGET_IP,
        help=f"IP replies are sent to (default {DEFAULT_TARGET_IP})",
    )
    parser.add_argument(
        "--headless",
        action="store_true",
        help="boot the OSC server immediately, without the operator panel",
    )
    parser.add_argument(
        "--remote",
        nargs="?",
        const="",
        default=None,
        metavar="IP",
        help=(
            "accept messages from other machines; binds the main adapter IP, "
            "or the given IP when connected to several networks"
        ),
    )
    parser.add_argument("--token", help="account token for the remote provider (or set OSCQASM_TOKEN)")
    parser.add_argument("--hub", default="", help="remote provider hub")
    parser.add_argument("--group", default="", help="remote provider group")
    parser.add_argument("--project", default="", help="remote provider project")
    parser.add_argument("--seed", type=int, help="fix the simulator RNG seed for reproducible counts")
    parser.add_argument(
        "--max-qubits",
        type=int,
        default=20,
        help="largest circuit the embedded simulator accepts (default 20)",
    )
    parser.add_argument(
        "--control-port",
        type=int,
        default=8642,
        help="HTTP port of the operator panel in non-headless mode (default 8642)",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return parser


def build_send_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="osc-qasm send",
        description="Send a program to a running server and print the reply.",
    )
    parser.add_argument("--file", required=True, help="path to an OpenQASM 2.0 file (bundled: bell.qasm)")
    parser.add_argument("--host", default="127.0.0.1", help="server address (default 127.0.0.1)")
    parser.add_argument(
        "--rport", type=int, default=DEFAULT_RECEIVE_PORT,
        help=f"server receive port (default {DEFAULT_RECEIVE_PORT})",
    )
    parser.add_argument(
        "--lport", type=int, default=DEFAULT_SEND_PORT,
        help=f"local port to listen on for replies (default {DEFAULT_SEND_PORT})",
    )
    parser.add_argument("--shots", type=int, default=DEFAULT_SHOTS, help=f"shot count (default {DEFAULT_SHOTS})")
    parser.add_argument("--backend", default="qasm_simulator", help="backend name (default qasm_simulator)")
    parser.add_argument("--timeout", type=float, default=10.0, help="seconds to wait for the terminal reply (default 10)")
    return parser


def parse_args(argv: list[str]) -> tuple[ServerConfig, str, int]:
    """Build a ServerConfig from server-form argv.

    Mode is 'serve' (headless) or 'control'; the third element is the
    operator-panel port. Usage problems exit with code 2.
    """
    parser = build_server_parser()
    args = parser.parse_args(argv)
    token = args.token if args.token is not None else os.environ.get("OSCQASM_TOKEN", "")
    credentials = None
    if token or args.hub or args.group or args.project:
        credentials = Credentials(token=token, hub=args.hub, group=args.group, project=args.project)
    config = ServerConfig(
        receive_port=args.receive_port,
        send_port=args.send_port,
        target_ip=args.target_ip,
        remote=args.remote is not None,
        bind_ip=args.remote if args.remote else None,
        credentials=credentials,
        max_qubits=args.max_qubits,
        seed=args.seed,
    )
    problems = validate_config(config)
    if problems:
        field, message = problems[0]
        parser.error(f"{field}: {message}")
    mode = "serve" if args.headless else "control"
    return config, mode, args.control_port


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and argv[0] == "send":
        return client_send(build_send_parser().parse_args(argv[1:]))
    config, mode, control_port = parse_args(argv)
    if mode == "serve":
        return serve_headless(config)
    return serve_control(config, control_port)


def _echo(event: LogEvent) -> None:
    stamp = datetime.fromtimestamp(event.ts).strftime("%H:%M:%S")
    prefix = "" if event.level == "notice" else f"{event.level}: "
    print(f"[{stamp}] {prefix}{event.line}", flush=True)


def serve_headless(config: ServerConfig) -> int:
    controller = ServerController(config, logbus=LogBus(echo=_echo))
    status = controller.start()
    if status["state"] != "running":
        print(f"error: {status['last_error']}", file=sys.stderr)
        return 1
    try:
        while True:
            time.sleep(1.0)
    except KeyboardInterrupt:
        pass
    finally:
        controller.shutdown()
    return EXIT_OK


def serve_control(config: ServerConfig, control_port: int) -> int:
    import uvicorn

    from .control.api import CONTROL_HOST, create_app

    controller = ServerController(config, logbus=LogBus(echo=_echo))
    app = create_app(controller)
    print(f"operator panel: http://{CONTROL_HOST}:{control_port}/", flush=True)
    try:
        uvicorn.run(app, host=CONTROL_HOST, port=control_port, log_level="warning")
    finally:
        controller.shutdown()
    return EXIT_OK


def _resolve_program(path_text: str) -> str:
    """Read the program from disk, falling back to the bundled circuits."""
    path = Path(path_text)
    if path.is_file():
        return path.read_text()
    bundled = importlib.resources.files("oscqasm").joinpath("circuits", path.name)
    if path_text == path.name and bundled.is_file():
        return bundled.read_text()
    raise FileNotFoundError(path_text)


def client_send(args: argparse.Namespace) -> int:
    """Submit one /QuTune message and wait for the terminal reply.

    /info lines go to stderr; the terminal payload is printed verbatim
    to stdout.
    """
    try:
        qasm = _resolve_program(args.file)
    except FileNotFoundError:
        print(f"error: no such file: {args.file}", file=sys.stderr)
        return EXIT_USAGE

    sock = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
    try:
        try:
            sock.bind(("", args.lport))
        except OSError as exc:
            print(f"error: cannot listen on port {args.lport}: {exc}", file=sys.stderr)
            return EXIT_USAGE
        message = osc.OscMessage("/QuTune", (qasm, args.shots, args.backend))
        sock.sendto(osc.encode(message), (args.host, args.rport))
        deadline = time.monotonic() + args.timeout
        while True:
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                print(f"error: no reply within {args.timeout:g} s", file=sys.stderr)
                return EXIT_TIMEOUT
            sock.settimeout(remaining)
            try:
                data, _ = sock.recvfrom(65_535)
            except socket.timeout:
                print(f"error: no reply within {args.timeout:g} s", file=sys.stderr)
                return EXIT_TIMEOUT
            try:
                reply = osc.decode(data)
            except osc.DecodeError as exc:
                print(f"ignoring undecodable datagram: {exc}", file=sys.stderr)
                continue
            payload = reply.args[0] if reply.args else ""
            if reply.address == "/info":
                print(payload, file=sys.stderr)
            elif reply.address == "/counts":
                print(payload)
                return EXIT_OK
            elif reply.address == "/error":
                print(payload)
                return EXIT_ERROR_REPLY
    finally:
        sock.close()


if __name__ == "__main__":
    sys.exit(main())
