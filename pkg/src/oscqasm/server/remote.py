"""Remote backend dispatch and the bundled mock provider.

A remote provider follows a submit/poll/fetch contract:

* ``submit`` hands over the program and returns a job id,
* ``status`` is polled until the job reaches ``done`` or ``error``,
* ``result`` fetches the aggregated counts.

`MockProvider` implements the contract over local HTTP against
`MockProviderService`, a small threaded server with three JSON endpoints:

* ``POST /jobs``              body {qasm, shots, backend, token} -> {job_id}
* ``GET  /jobs/<id>/status``  -> {status: queued|running|done|error, [message]}
* ``GET  /jobs/<id>/result``  -> {counts: {...}}

The service executes jobs on the embedded simulator (or returns canned
counts) after a configurable latency, so timeout and failure paths can be
exercised without any real cloud account.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Protocol

import httpx

from ..qasm import QasmError, compile_source
from ..sim import SimError, run
from .config import Credentials


class RemoteError(Exception):
    """Provider-side failure; unexpected ones surface with code 'remote'."""

    code = "remote"


class AuthFailed(RemoteError):
    code = "AuthFailed"


class RemoteTimeout(RemoteError):
    code = "RemoteTimeout"


class RemoteRejected(RemoteError):
    code = "RemoteRejected"


class RemoteProvider(Protocol):
    def backend_names(self) -> list[str]: ...

    def submit(self, qasm: str, shots: int, backend: str, credentials: Credentials) -> str: ...

    def status(self, job_id: str) -> str: ...

    def result(self, job_id: str) -> dict[str, int]: ...


def submit_remote(
    provider: RemoteProvider,
    qasm: str,
    shots: int,
    backend: str,
    credentials: Credentials | None,
    poll_budget_s: float = 300.0,
    poll_interval_s: float = 0.05,
) -> dict[str, int]:
    """Run one job through `provider` and return its counts.

    An empty token fails before any network traffic.
    """
    if credentials is None or not credentials.token:
        raise AuthFailed("a non-empty account token is required")
    job_id = provider.submit(qasm, shots, backend, credentials)
    deadline = time.monotonic() + poll_budget_s
    while True:
        status = provider.status(job_id)
        if status == "done":
            return provider.result(job_id)
        if status == "error":
            raise RemoteRejected(f"job {job_id} failed on the remote backend")
        if time.monotonic() >= deadline:
            raise RemoteTimeout(
                f"job {job_id} not finished after {poll_budget_s:g} s (last status: {status})"
            )
        time.sleep(min(poll_interval_s, max(0.0, deadline - time.monotonic())))


class MockProvider:
    """HTTP client side of the mock remote backend."""

    def __init__(self, base_url: str, timeout: float = 10.0):
        self.base_url = base_url.rstrip("/")
        self._client = httpx.Client(base_url=self.base_url, timeout=timeout)

    def backend_names(self) -> list[str]:
        return ["mock_remote"]

    def submit(self, qasm: str, shots: int, backend: str, credentials: Credentials) -> str:
        resp = self._client.post(
            "/jobs",
            json={
                "qasm": qasm,
                "shots": shots,
                "backend": backend,
                "token": credentials.token,
            },
        )
        if resp.status_code == 401:
            raise AuthFailed("remote provider rejected the account token")
        if resp.status_code != 201:
            raise RemoteRejected(f"submission rejected: {resp.text}")
        return str(resp.json()["job_id"])

    def status(self, job_id: str) -> str:
        resp = self._client.get(f"/jobs/{job_id}/status")
        if resp.status_code != 200:
            raise RemoteRejected(f"status query failed: {resp.text}")
        return resp.json()["status"]

    def result(self, job_id: str) -> dict[str, int]:
        resp = self._client.get(f"/jobs/{job_id}/result")
        if resp.status_code != 200:
            raise RemoteRejected(f"result fetch failed: {resp.text}")
        return {str(k): int(v) for k, v in resp.json()["counts"].items()}

    def close(self) -> None:
        self._client.close()


@dataclass
class _MockJob:
    qasm: str
    shots: int
    ready_at: float
    counts: dict[str, int] | None = None
    error: str | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)


class MockProviderService:
    """Local stand-in for a cloud quantum provider.

    `latency_s` delays job completion; `stall=True` keeps every job queued
    forever (for timeout tests); `canned_counts` skips simulation.
    """

    def __init__(
        self,
        token: str = "mock-token",
        latency_s: float = 0.0,
        stall: bool = False,
        canned_counts: dict[str, int] | None = None,
        seed: int | None = None,
        max_qubits: int = 20,
    ):
        self.token = token
        self.latency_s = latency_s
        self.stall = stall
        self.canned_counts = canned_counts
        self.seed = seed
        self.max_qubits = max_qubits
        self._jobs: dict[str, _MockJob] = {}
        self._next_id = 0
        self._lock = threading.Lock()
        self._httpd: ThreadingHTTPServer | None = None
        self._thread: threading.Thread | None = None

    # -- lifecycle ----------------------------------------------------------

    def start(self) -> str:
        service = self

        class Handler(BaseHTTPRequestHandler):
            def log_message(self, *args):  # silence request logging
                pass

            def _send(self, code: int, body: dict) -> None:
                data = json.dumps(body).encode()
                self.send_response(code)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(data)))
                self.end_headers()
                self.wfile.write(data)

            def do_POST(self) -> None:
                if self.path != "/jobs":
                    self._send(404, {"error": "not found"})
                    return
                length = int(self.headers.get("Content-Length", "0"))
                try:
                    payload = json.loads(self.rfile.read(length))
                except json.JSONDecodeError:
                    self._send(400, {"error": "invalid JSON"})
                    return
                if payload.get("token") != service.token:
                    self._send(401, {"error": "invalid token"})
                    return
                if not isinstance(payload.get("qasm"), str) or not isinstance(
                    payload.get("shots"), int
                ):
                    self._send(400, {"error": "qasm (str) and shots (int) are required"})
                    return
                job_id = service._create_job(payload["qasm"], payload["shots"])
                self._send(201, {"job_id": job_id})

            def do_GET(self) -> None:
                parts = self.path.strip("/").split("/")
                if len(parts) != 3 or parts[0] != "jobs":
                    self._send(404, {"error": "not found"})
                    return
                job = service._jobs.get(parts[1])
                if job is None:
                    self._send(404, {"error": f"no job {parts[1]!r}"})
                    return
                if parts[2] == "status":
                    self._send(200, service._job_status(job))
                elif parts[2] == "result":
                    status = service._job_status(job)["status"]
                    if status != "done":
                        self._send(409, {"error": f"job is {status}"})
                    else:
                        self._send(200, {"counts": job.counts})
                else:
                    self._send(404, {"error": "not found"})

        self._httpd = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self._httpd.daemon_threads = True
        self._thread = threading.Thread(target=self._httpd.serve_forever, daemon=True)
        self._thread.start()
        host, port = self._httpd.server_address[:2]
        return f"http://{host}:{port}"

    def stop(self) -> None:
        if self._httpd is not None:
            self._httpd.shutdown()
            self._httpd.server_close()
            self._httpd = None
        if self._thread is not None:
            self._thread.join(timeout=5)
            self._thread = None

    # -- job handling ---------------------------------------------------------

    def _create_job(self, qasm: str, shots: int) -> str:
        with self._lock:
            self._next_id += 1
            job_id = str(self._next_id)
            self._jobs[job_id] = _MockJob(qasm, shots, time.monotonic() + self.latency_s)
        return job_id

    def _job_status(self, job: _MockJob) -> dict[str, str]:
        if self.stall:
            return {"status": "queued"}
        if time.monotonic() < job.ready_at:
            return {"status": "running"}
        with job.lock:
            if job.counts is None and job.error is None:
                self._finish(job)
        if job.error is not None:
            return {"status": "error", "message": job.error}
        return {"status": "done"}

    def _finish(self, job: _MockJob) -> None:
        if self.canned_counts is not None:
            job.counts = dict(self.canned_counts)
            return
        try:
            circ = compile_source(job.qasm)
            job.counts = run(circ, job.shots, seed=self.seed, max_qubits=self.max_qubits)
        except (QasmError, SimError) as exc:
            job.error = str(exc)
