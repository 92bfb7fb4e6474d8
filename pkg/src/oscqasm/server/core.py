"""The OSC server: socket lifecycle, /QuTune routing, job execution, replies.

One receive loop pushes raw datagrams onto a FIFO queue; worker threads
(one by default, so replies keep request order) decode, compile, execute
and reply. Every received datagram produces exactly one terminal reply to
the configured target address: ``/counts`` on success, ``/error``
otherwise. ``/info`` messages mirror job-scoped notice log lines.

Lifecycle is a small observable state machine:
stopped -> starting -> running -> stopping -> stopped.
"""

from __future__ import annotations

import enum
import json
import math
import queue
import socket
import threading
import time
from dataclasses import dataclass

from .. import osc
from ..qasm import QasmError, compile_source
from ..sim import ShotsOutOfRange, SimError, run
from ..sim.runner import MAX_SHOTS
from .backends import LOCAL_SIMULATOR, BackendLimits, BackendRegistry
from .config import ServerConfig, validate_config
from .errors import (
    BadArgType,
    BindFailure,
    ConfigError,
    IllegalTransition,
    MissingQasm,
    ServerStopped,
)
from .logbus import LogBus
from .netutil import detect_primary_ip
from .remote import RemoteError, RemoteProvider, submit_remote

RECV_BUFFER = 65_535
_POLL_S = 0.2


class ServerState(str, enum.Enum):
    STOPPED = "stopped"
    STARTING = "starting"
    RUNNING = "running"
    STOPPING = "stopping"


@dataclass(frozen=True)
class JobRequest:
    job_id: int
    qasm_source: str
    shots: int
    backend_name: str
    reply_addr: tuple[str, int]
    received_at: float


@dataclass(frozen=True)
class JobResult:
    counts: dict[str, int] | None = None
    error: tuple[str, str] | None = None  # (code, message)
    elapsed_ms: float = 0.0

    def __post_init__(self) -> None:
        assert (self.counts is None) != (self.error is None)


def counts_to_json(counts: dict[str, int]) -> str:
    """Counts as JSON text, keys by descending count then lexicographic."""
    ordered = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return json.dumps(dict(ordered))


class OscQasmServer:
    def __init__(
        self,
        config: ServerConfig,
        logbus: LogBus | None = None,
        provider: RemoteProvider | None = None,
    ):
        self.config = config
        self.logbus = logbus or LogBus()
        self.registry = BackendRegistry()
        self.registry.register_local(
            LOCAL_SIMULATOR, BackendLimits(config.max_qubits, MAX_SHOTS)
        )
        if provider is not None:
            self.registry.register_remote(
                provider, BackendLimits(config.max_qubits, MAX_SHOTS)
            )
        self._state = ServerState.STOPPED
        self._state_cond = threading.Condition()
        self._sock: socket.socket | None = None
        self._queue: queue.Queue = queue.Queue()
        self._threads: list[threading.Thread] = []
        self._stop_intake = threading.Event()
        self._drop_pending = threading.Event()
        self._job_counter = 0
        self._job_lock = threading.Lock()
        self.jobs_done = 0
        self.started_at: float | None = None
        self.last_error: str | None = None
        self.bound_address: tuple[str, int] | None = None

    # -- lifecycle ------------------------------------------------------------

    @property
    def state(self) -> ServerState:
        return self._state

    def _set_state(self, state: ServerState) -> None:
        with self._state_cond:
            self._state = state
            self._state_cond.notify_all()

    def resolve_bind_ip(self) -> str:
        """Bind address per the remote rules: loopback unless remote."""
        if not self.config.remote:
            return "127.0.0.1"
        if self.config.bind_ip:
            return self.config.bind_ip
        detected = detect_primary_ip()
        if detected is None:
            self.logbus.error("no non-loopback adapter found; binding all interfaces")
            return "0.0.0.0"
        return detected

    def start(self) -> None:
        """Bind, spawn threads, and log the two boot lines.

        Raises ConfigError / BindFailure with the server back in the
        stopped state and `last_error` set.
        """
        if self._state != ServerState.STOPPED:
            raise IllegalTransition(f"cannot start while {self._state.value}")
        self._set_state(ServerState.STARTING)
        problems = validate_config(self.config)
        if problems:
            detail = "; ".join(f"{f}: {m}" for f, m in problems)
            self.last_error = f"invalid config: {detail}"
            self._set_state(ServerState.STOPPED)
            raise ConfigError(self.last_error)
        bind_ip = self.resolve_bind_ip()
        sock = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
        try:
            sock.bind((bind_ip, self.config.receive_port))
        except OSError as exc:
            sock.close()
            self.last_error = f"cannot bind {bind_ip}:{self.config.receive_port}: {exc}"
            self._set_state(ServerState.STOPPED)
            self.logbus.error(self.last_error)
            raise BindFailure(self.last_error) from exc
        sock.settimeout(_POLL_S)
        self._sock = sock
        self.bound_address = sock.getsockname()[:2]
        self._stop_intake.clear()
        self._drop_pending.clear()
        self._queue = queue.Queue()
        self.last_error = None

        receiver = threading.Thread(target=self._recv_loop, name="osc-recv", daemon=True)
        workers = [
            threading.Thread(target=self._worker_loop, name=f"osc-worker-{i}", daemon=True)
            for i in range(self.config.parallel_jobs)
        ]
        self._threads = [receiver, *workers]
        for t in self._threads:
            t.start()
        self.started_at = time.time()
        self.logbus.notice(
            f"server config: receive {bind_ip}:{self.config.receive_port} | "
            f"reply to {self.config.target_ip}:{self.config.send_port} | "
            f"backends: {', '.join(self.registry.names())}"
        )
        self.logbus.notice("ready to exchange OSC messages")
        self._set_state(ServerState.RUNNING)

    def stop(self) -> None:
        """Cooperative shutdown: the in-flight job finishes and its reply
        is still sent; queued jobs are dropped with /error replies."""
        if self._state != ServerState.RUNNING:
            raise IllegalTransition(f"cannot stop while {self._state.value}")
        self._set_state(ServerState.STOPPING)
        self._stop_intake.set()
        receiver, *workers = self._threads
        receiver.join()
        self._drop_pending.set()
        for _ in workers:
            self._queue.put(None)  # sentinel
        for t in workers:
            t.join()
        if self._sock is not None:
            self._sock.close()
            self._sock = None
        self._threads = []
        self.started_at = None
        self.logbus.notice("server stopped")
        self._set_state(ServerState.STOPPED)

    # -- receive / dispatch -----------------------------------------------------

    def _recv_loop(self) -> None:
        assert self._sock is not None
        while not self._stop_intake.is_set():
            try:
                data, addr = self._sock.recvfrom(RECV_BUFFER)
            except socket.timeout:
                continue
            except OSError:
                break
            self._queue.put((data, addr))

    def _worker_loop(self) -> None:
        while True:
            try:
                item = self._queue.get(timeout=_POLL_S)
            except queue.Empty:
                if self._drop_pending.is_set():
                    return
                continue
            if item is None:
                return
            data, addr = item
            if self._drop_pending.is_set():
                self._send_error(ServerStopped.code, "server stopping before job could run")
                continue
            try:
                self._process_datagram(data, addr)
            except Exception as exc:  # never let one datagram kill the loop
                self.logbus.error(f"internal error: {exc!r}")
                self._send_error("Internal", str(exc) or repr(exc))

    def _process_datagram(self, data: bytes, addr: tuple[str, int]) -> None:
        try:
            msg = osc.decode(data)
        except osc.DecodeError as exc:
            self.logbus.error(f"undecodable datagram from {addr[0]}:{addr[1]}: {exc}")
            self._send_error(exc.code, str(exc))
            return
        if msg.address != "/QuTune":
            self.logbus.error(f"no handler for path {msg.address!r}")
            self._send_error("UnknownAddress", f"no handler for path {msg.address!r}")
            return
        try:
            req = self.handle_qutune(msg)
        except (MissingQasm, BadArgType, SimError) as exc:
            code = getattr(exc, "code", "error")
            self.logbus.error(f"rejected /QuTune: {code}: {exc}")
            self._send_error(code, str(exc))
            return
        self._log_job(req.job_id, f"received: {req.shots} shots on {req.backend_name}")
        result = self.execute(req)
        self.reply(result, req)
        self.jobs_done += 1

    def handle_qutune(self, msg: osc.OscMessage) -> JobRequest:
        """Unpack the 1-to-3-value argument list into a JobRequest."""
        args = msg.args
        if len(args) == 0:
            raise MissingQasm("the /QuTune message carried no values")
        if len(args) > 3:
            raise BadArgType(f"/QuTune takes 1 to 3 values, got {len(args)}")
        if not isinstance(args[0], str):
            raise BadArgType("first value must be Qasm text")
        qasm = args[0]
        shots = self.config.default_shots
        if len(args) >= 2:
            raw = args[1]
            if isinstance(raw, bool) or not isinstance(raw, (int, float)):
                raise BadArgType("second value (shots) must be an integer or float")
            if isinstance(raw, float):
                if not math.isfinite(raw):
                    raise BadArgType(f"second value (shots) must be finite, got {raw}")
                raw = int(raw)  # truncate toward zero
            shots = raw
        if not 1 <= shots <= MAX_SHOTS:
            raise ShotsOutOfRange(f"shots must be in 1..{MAX_SHOTS}, got {shots}")
        backend = LOCAL_SIMULATOR
        if len(args) == 3:
            if not isinstance(args[2], str):
                raise BadArgType("third value (backend name) must be a string")
            backend = args[2] or LOCAL_SIMULATOR
        with self._job_lock:
            self._job_counter += 1
            job_id = self._job_counter
        return JobRequest(
            job_id=job_id,
            qasm_source=qasm,
            shots=shots,
            backend_name=backend,
            reply_addr=(self.config.target_ip, self.config.send_port),
            received_at=time.time(),
        )

    # -- execution ------------------------------------------------------------

    def execute(self, req: JobRequest) -> JobResult:
        """parse -> elaborate -> dispatch to the named backend."""
        started = time.monotonic()

        def fail(code: str, message: str) -> JobResult:
            return JobResult(
                error=(code, message),
                elapsed_ms=(time.monotonic() - started) * 1000.0,
            )

        try:
            descriptor, provider = self.registry.lookup(req.backend_name)
        except Exception as exc:
            return fail(getattr(exc, "code", "error"), str(exc))
        try:
            circuit = compile_source(req.qasm_source)
        except QasmError as exc:
            return fail(exc.code, str(exc))
        if circuit.num_measurements == 0:
            return fail(
                "NoMeasurements",
                "the circuit must contain at least one measurement",
            )
        try:
            if descriptor.kind == "remote":
                assert provider is not None
                counts = submit_remote(
                    provider,
                    req.qasm_source,
                    req.shots,
                    req.backend_name,
                    self.config.credentials,
                    poll_budget_s=self.config.remote_timeout_s,
                )
            else:
                counts = run(
                    circuit,
                    req.shots,
                    seed=self.config.seed,
                    max_qubits=self.config.max_qubits,
                )
        except (SimError, RemoteError) as exc:
            return fail(getattr(exc, "code", "error"), str(exc))
        return JobResult(counts=counts, elapsed_ms=(time.monotonic() - started) * 1000.0)

    # -- replies ----------------------------------------------------------------

    def reply(self, result: JobResult, req: JobRequest) -> None:
        if result.error is not None:
            code, message = result.error
            self.logbus.error(f"job {req.job_id} failed: {code}: {message}")
            self._send_error(code, message)
            return
        assert result.counts is not None
        self._log_job(req.job_id, f"done in {result.elapsed_ms:.0f} ms")
        payload = counts_to_json(result.counts)
        try:
            data = osc.encode(osc.OscMessage("/counts", (payload,)))
        except osc.OversizeMessage:
            self._send_error(
                "OversizeMessage",
                f"counts payload too large for one datagram ({len(payload)} bytes)",
            )
            return
        self._send_raw(data)

    def _log_job(self, job_id: int, text: str) -> None:
        """Job-scoped notice lines are mirrored as /info messages."""
        line = f"job {job_id} {text}"
        self.logbus.notice(line)
        self._send(osc.OscMessage("/info", (line,)))

    def _send_error(self, code: str, message: str) -> None:
        self._send(osc.OscMessage("/error", (f"{code}: {message}",)))

    def _send(self, msg: osc.OscMessage) -> None:
        try:
            self._send_raw(osc.encode(msg))
        except osc.OscError as exc:
            self.logbus.error(f"cannot encode {msg.address} reply: {exc}")

    def _send_raw(self, data: bytes) -> None:
        sock = self._sock
        if sock is None:
            return
        target = (self.config.target_ip, self.config.send_port)
        try:
            sock.sendto(data, target)
        except OSError as exc:
            self.logbus.error(f"send failure to {target[0]}:{target[1]}: {exc}")

    # -- status ------------------------------------------------------------------

    def uptime_s(self) -> float:
        if self.started_at is None or self._state != ServerState.RUNNING:
            return 0.0
        return time.time() - self.started_at

    def wait_for_state(self, state: ServerState, timeout: float = 10.0) -> bool:
        with self._state_cond:
            return self._state_cond.wait_for(lambda: self._state == state, timeout)
