"""Acceptance suite: every criterion at its stated tolerance.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one line per
criterion.
"""

import itertools
import json
import math
import random
import re
import socket
import subprocess
import sys
import time
from contextlib import contextmanager

import pytest

from oscqasm import osc
from oscqasm.cli import main, parse_args
from oscqasm.qasm import compile_source
from oscqasm.qasm.ir import CircuitIR, CXOp, MeasureOp, UOp
from oscqasm.server import (
    Credentials,
    MockProvider,
    MockProviderService,
    OscQasmServer,
    ServerConfig,
    ServerState,
)
from oscqasm.sim import TooManyQubits, outcome_distribution, run

from conftest import BELL_SOURCE, ReplyListener, free_udp_port
from matrix_oracle import TEXTBOOK_1Q, circuit_unitary, phase_distance
from test_server import collect_until_terminal, send_qutune

PI = math.pi

BELL_BOUNDS = (432, 592)  # 1024 shots, +/- 5 sigma of Binomial(1024, 0.5)
GHZ_BOUNDS = (1843, 2253)  # 4096 shots, stated acceptance interval


@contextmanager
def criterion(name: str):
    try:
        yield
    except BaseException:
        print(f"\nACCEPTANCE FAIL: {name}", flush=True)
        raise
    print(f"\nACCEPTANCE PASS: {name}", flush=True)


def start_server(**overrides) -> OscQasmServer:
    server = OscQasmServer(ServerConfig(**overrides))
    server.start()
    return server


def stop_server(server: OscQasmServer) -> None:
    if server.state == ServerState.RUNNING:
        server.stop()


def spawn_cli(*args: str) -> subprocess.Popen:
    proc = subprocess.Popen(
        [sys.executable, "-m", "oscqasm.cli", *args],
        stdout=subprocess.PIPE,
        stderr=subprocess.STDOUT,
        text=True,
    )
    deadline = time.monotonic() + 20
    while time.monotonic() < deadline:
        line = proc.stdout.readline()
        if "ready to exchange" in line:
            return proc
    proc.terminate()
    raise AssertionError("server process never became ready")


def test_a01_bell_round_trip(capsys):
    """Bell round trip through the CLI against a default local server."""
    with criterion("Bell-state round trip (keys, sum, 5-sigma bounds, < 2 s, seeded repeatability)"):
        server = start_server()  # paper defaults: 1416 -> 127.0.0.1:1417
        try:
            started = time.monotonic()
            code = main(["send", "--file", "bell.qasm"])
            elapsed = time.monotonic() - started
            assert code == 0
            counts = json.loads(capsys.readouterr().out.strip())
            assert set(counts) <= {"00", "11"}
            assert sum(counts.values()) == 1024
            for value in counts.values():
                assert BELL_BOUNDS[0] <= value <= BELL_BOUNDS[1]
            assert elapsed < 2.0, f"round trip took {elapsed:.2f} s"
        finally:
            stop_server(server)

        # fixed seed twice -> byte-identical payloads
        server = start_server(seed=42)
        try:
            assert main(["send", "--file", "bell.qasm"]) == 0
            first = capsys.readouterr().out
            assert main(["send", "--file", "bell.qasm"]) == 0
            second = capsys.readouterr().out
            assert first.encode() == second.encode()
        finally:
            stop_server(server)


def test_a02_defaults_conformance():
    """No-argument server listens on 1416 and replies to 127.0.0.1:1417."""
    with criterion("Defaults conformance (external probe of 1416 -> 127.0.0.1:1417)"):
        listener = ReplyListener(port=1417)
        proc = spawn_cli("--headless")
        try:
            probe = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
            probe.sendto(
                osc.encode(osc.OscMessage("/QuTune", (BELL_SOURCE, 64))),
                ("127.0.0.1", 1416),
            )
            probe.close()
            terminal = collect_until_terminal(listener, timeout=15)[-1]
            assert terminal.address == "/counts"
            assert sum(json.loads(terminal.args[0]).values()) == 64
        finally:
            proc.terminate()
            proc.wait(timeout=10)
            listener.close()


def test_a03_cli_conformance():
    """The paper's invocation produces the right listener and reply target."""
    with criterion("CLI conformance (3000 3005 <ip> --headless; --help lists all flags)"):
        proc = spawn_cli("3000", "3005", "192.168.0.1", "--headless")
        try:
            blocked = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
            with pytest.raises(OSError):
                blocked.bind(("127.0.0.1", 3000))  # listener occupies the port
            blocked.close()
        finally:
            proc.terminate()
            proc.wait(timeout=10)

        # reply target verified via a loopback alias standing in for the LAN peer
        listener = ReplyListener(host="127.0.0.2", port=3005)
        proc = spawn_cli("3000", "3005", "127.0.0.2", "--headless")
        try:
            send_qutune(3000, BELL_SOURCE, 32)
            assert collect_until_terminal(listener, timeout=15)[-1].address == "/counts"
        finally:
            proc.terminate()
            proc.wait(timeout=10)
            listener.close()

        result = subprocess.run(
            [sys.executable, "-m", "oscqasm.cli", "--help"],
            capture_output=True,
            text=True,
            timeout=30,
        )
        assert result.returncode == 0
        for flag in ("--headless", "--remote", "--token", "--hub", "--group",
                     "--project", "--seed", "--max-qubits", "--control-port"):
            assert flag in result.stdout


def test_a04_remote_bind_rule():
    """remote=false serves loopback only; --remote <ip> binds exactly there."""
    with criterion("Remote-bind rule (loopback-only by default; exact bind with --remote <ip>)"):
        from oscqasm.server import detect_primary_ip

        listener = ReplyListener()
        rport = free_udp_port()
        server = start_server(receive_port=rport, send_port=listener.port)
        try:
            assert server.bound_address[0] == "127.0.0.1"
            adapter = detect_primary_ip()
            if adapter is not None:
                send_qutune(rport, BELL_SOURCE, 8, host=adapter)
                with pytest.raises(socket.timeout):
                    listener.recv(timeout=0.8)  # off-loopback probe: no service
            send_qutune(rport, BELL_SOURCE, 8)
            assert collect_until_terminal(listener)[-1].address == "/counts"
        finally:
            stop_server(server)

        config, _, _ = parse_args(
            [str(free_udp_port()), str(listener.port), "--remote", "127.0.0.3", "--headless"]
        )
        server = OscQasmServer(config)
        server.start()
        try:
            assert server.bound_address[0] == "127.0.0.3"
            send_qutune(config.receive_port, BELL_SOURCE, 8, host="127.0.0.3")
            assert collect_until_terminal(listener)[-1].address == "/counts"
            # bound exactly there: 127.0.0.1 does not reach it
            send_qutune(config.receive_port, BELL_SOURCE, 8, host="127.0.0.1")
            with pytest.raises(socket.timeout):
                listener.recv(timeout=0.8)
        finally:
            stop_server(server)
            listener.close()


def _bit_pattern_program(value: int, bits: int = 8) -> str:
    lines = ['OPENQASM 2.0; include "qelib1.inc";', f"qreg q[{bits}];", f"creg c[{bits}];"]
    for b in range(bits):
        if (value >> b) & 1:
            lines.append(f"x q[{b}];")
    lines.append("measure q -> c;")
    return "\n".join(lines)


def test_a05_protocol_totality():
    """200 mixed requests -> exactly 200 ordered terminal replies; 10k fuzz."""
    with criterion("Protocol totality (200 ordered terminal replies; 10,000-datagram fuzz)"):
        listener = ReplyListener()
        rport = free_udp_port()
        server = start_server(receive_port=rport, send_port=listener.port, seed=5)
        try:
            total = 200
            expected = []
            for i in range(total):
                kind = i % 4
                if kind == 0:
                    send_qutune(rport, _bit_pattern_program(i), 4)
                elif kind == 1:
                    send_qutune(rport, "OPENQASM 2.0; qreg q[1];", 4, f"nope_{i}")
                elif kind == 2:
                    send_qutune(rport, f"OPENQASM 2.0; qreg q[1]; badtoken_{i} q[0];", 4)
                else:
                    send_qutune(rport, _bit_pattern_program(i), 1_100_000 + i)
                expected.append((kind, i))
                time.sleep(0.001)

            observed = []
            deadline = time.monotonic() + 60
            while len(observed) < total and time.monotonic() < deadline:
                msg = osc.decode(listener.recv(timeout=deadline - time.monotonic()))
                if msg.address == "/counts":
                    key = next(iter(json.loads(msg.args[0])))
                    observed.append((0, int(key, 2)))
                elif msg.address == "/error":
                    payload = msg.args[0]
                    if match := re.search(r"nope_(\d+)", payload):
                        observed.append((1, int(match.group(1))))
                    elif match := re.search(r"badtoken_(\d+)", payload):
                        observed.append((2, int(match.group(1))))
                    elif match := re.search(r"got 1100(\d{3})", payload):
                        observed.append((3, int(match.group(1))))
                    else:
                        raise AssertionError(f"unattributable reply: {payload}")
            assert observed == expected, "reply count or order mismatch"

            # 10,000-datagram fuzz: zero crashes, zero leaked jobs
            rng = random.Random(99)
            sock = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
            for _ in range(10_000):
                sock.sendto(rng.randbytes(rng.randrange(0, 96)), ("127.0.0.1", rport))
            sock.close()
            try:
                while True:
                    listener.recv(timeout=0.5)
            except socket.timeout:
                pass
            assert server.state == ServerState.RUNNING
            assert server._queue.qsize() == 0  # nothing leaked in the pipeline
            send_qutune(rport, BELL_SOURCE, 16)
            assert collect_until_terminal(listener)[-1].address == "/counts"
        finally:
            stop_server(server)
            listener.close()


def test_a06_compiler_fidelity():
    """qelib1 single-qubit matrices within 1e-12; GHZ counts in bounds."""
    with criterion("Compiler fidelity (matrix table at 1e-12; GHZ 4096-shot bounds)"):
        cases = {
            "x": (), "y": (), "z": (), "h": (), "s": (), "sdg": (), "t": (),
            "tdg": (), "id": (), "u1": (0.7,), "u2": (0.7, -1.2), "u3": (0.7, -1.2, 2.1),
            "rx": (0.7,), "ry": (0.7,), "rz": (0.7,),
        }
        for gate, params in cases.items():
            params_text = f"({','.join(map(repr, params))})" if params else ""
            circ = compile_source(
                f'OPENQASM 2.0; include "qelib1.inc"; qreg q[1]; {gate}{params_text} q[0];'
            )
            actual = circuit_unitary(circ)
            expected = TEXTBOOK_1Q[gate](*params)
            distance = phase_distance(actual, expected)
            assert distance <= 1e-12, f"{gate}: {distance}"

        ghz = compile_source(
            'OPENQASM 2.0; include "qelib1.inc"; qreg q[3]; creg c[3]; '
            "h q[0]; cx q[0],q[1]; cx q[1],q[2]; measure q -> c;"
        )
        counts = run(ghz, 4096, seed=2024)
        assert set(counts) <= {"000", "111"}
        assert sum(counts.values()) == 4096
        for value in counts.values():
            assert GHZ_BOUNDS[0] <= value <= GHZ_BOUNDS[1]


def test_a07_dynamics():
    """Conditional teleport-style circuit collapses deterministically."""
    with criterion("Dynamics (conditional circuit returns {'11': shots} exactly)"):
        circ = compile_source(
            'OPENQASM 2.0; include "qelib1.inc"; qreg q[2]; creg c[2]; '
            "x q[0]; measure q[0] -> c[0]; if (c==1) x q[1]; measure q[1] -> c[1];"
        )
        assert circ.has_dynamics
        for shots in (1, 64, 1000):
            assert run(circ, shots) == {"11": shots}


H_PARAMS = (PI / 2, 0.0, PI)
X_PARAMS = (PI, 0.0, PI)


def test_a08_oracle_equivalence():
    """All 2-qubit circuits of <= 4 ops from {h, x, cx}: fast path equals
    brute-force matrix-product probabilities within 1e-9."""
    with criterion("Oracle equivalence (exhaustive <= 4-op {h,x,cx} circuits at 1e-9)"):
        op_choices = [
            UOp(*H_PARAMS, 0), UOp(*H_PARAMS, 1),
            UOp(*X_PARAMS, 0), UOp(*X_PARAMS, 1),
            CXOp(0, 1), CXOp(1, 0),
        ]
        measures = (MeasureOp(0, 0), MeasureOp(1, 1))
        checked = 0
        for length in range(5):
            for combo in itertools.product(op_choices, repeat=length):
                circ = CircuitIR(2, (("c", 2),), tuple(combo) + measures)
                fast = outcome_distribution(circ)
                amps = circuit_unitary(
                    CircuitIR(2, (("c", 2),), tuple(combo))
                )[:, 0]
                for index in range(4):
                    key = format(index, "02b")
                    brute = abs(amps[index]) ** 2
                    assert abs(fast.get(key, 0.0) - brute) <= 1e-9
                checked += 1
        assert checked == 1 + 6 + 36 + 216 + 1296


def test_a09_mock_remote_path():
    """Mock provider round trip plus AuthFailed / RemoteTimeout, with
    credential redaction everywhere."""
    with criterion("Mock-remote path (success, AuthFailed, RemoteTimeout, token redaction)"):
        token = "sk-deepsecret-wxyz"
        secret_part = "deepsecret"
        listener = ReplyListener()

        captured_lines = []

        def run_case(service_token, server_token, timeout_s=30.0):
            service = MockProviderService(token=service_token, seed=11)
            provider = MockProvider(service.start())
            config = ServerConfig(
                receive_port=free_udp_port(),
                send_port=listener.port,
                credentials=Credentials(token=server_token),
                seed=11,
                remote_timeout_s=timeout_s,
            )
            server = OscQasmServer(config, provider=provider)
            sub = server.logbus.subscribe(capacity=500)
            server.start()
            try:
                send_qutune(config.receive_port, BELL_SOURCE, 128, "mock_remote")
                terminal = collect_until_terminal(listener, timeout=20)[-1]
            finally:
                stop_server(server)
                while (event := sub.get(timeout=0.05)) is not None:
                    captured_lines.append(event.line)
                service.stop()
                provider.close()
            from oscqasm.server import config_as_dict

            captured_lines.append(json.dumps(config_as_dict(config)))
            return terminal

        reply = run_case(token, token)
        assert reply.address == "/counts"
        local = run(compile_source(BELL_SOURCE), 128, seed=11)
        assert json.loads(reply.args[0]) == local

        reply = run_case(token, "sk-wrongtoken-zzzz")
        assert reply.address == "/error" and reply.args[0].startswith("AuthFailed")

        service = MockProviderService(token=token, stall=True)
        provider = MockProvider(service.start())
        config = ServerConfig(
            receive_port=free_udp_port(),
            send_port=listener.port,
            credentials=Credentials(token=token),
            remote_timeout_s=1.0,
        )
        server = OscQasmServer(config, provider=provider)
        server.start()
        try:
            send_qutune(config.receive_port, BELL_SOURCE, 16, "mock_remote")
            reply = collect_until_terminal(listener, timeout=20)[-1]
            assert reply.address == "/error" and reply.args[0].startswith("RemoteTimeout")
        finally:
            stop_server(server)
            service.stop()
            provider.close()
            listener.close()

        blob = "\n".join(captured_lines)
        assert secret_part not in blob, "credential bytes leaked into logs/status"
        assert "wxyz" in blob  # the allowed last-4 display does appear


def test_a10_desk_scale_performance():
    """16-qubit/100-gate/1024-shot job under 5 s; bounds check instant."""
    with criterion("Desk-scale performance (16q x 100 gates x 1024 shots < 5 s; instant TooManyQubits)"):
        rng = random.Random(31)
        lines = ['OPENQASM 2.0; include "qelib1.inc";', "qreg q[16];", "creg c[16];"]
        for _ in range(100):
            if rng.random() < 0.5:
                control, target = rng.sample(range(16), 2)
                lines.append(f"cx q[{control}], q[{target}];")
            else:
                lines.append(f"h q[{rng.randrange(16)}];")
        lines.append("measure q -> c;")
        circ = compile_source("\n".join(lines))
        started = time.monotonic()
        counts = run(circ, 1024, seed=8)
        elapsed = time.monotonic() - started
        assert sum(counts.values()) == 1024
        assert elapsed < 5.0, f"took {elapsed:.2f} s"

        big = compile_source(
            "OPENQASM 2.0; qreg q[20]; creg c[1]; measure q[0] -> c[0];"
        )
        started = time.monotonic()
        with pytest.raises(TooManyQubits):
            run(big, 1024, max_qubits=16)
        assert time.monotonic() - started < 0.5, "bounds check was not instant"
