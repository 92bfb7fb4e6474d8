import json
import re
import threading
import time
from pathlib import Path

import httpx
import pytest
import uvicorn
from fastapi.testclient import TestClient

from oscqasm.server import Credentials, LogBus, ServerConfig, ServerState
from oscqasm.server.controller import ServerController
from oscqasm.control.api import create_app

from conftest import free_udp_port


def make_controller(**overrides) -> ServerController:
    config = ServerConfig(
        receive_port=overrides.pop("receive_port", free_udp_port()),
        send_port=overrides.pop("send_port", free_udp_port()),
        **overrides,
    )
    # no provider service in API tests
    return ServerController(config, provider_factory=lambda cfg: None)


@pytest.fixture
def live_api():
    """Control API on a real local HTTP port (needed for streaming)."""
    controller = make_controller()
    app = create_app(controller, dashboard_dir=None)
    port = free_udp_port()  # free TCP port, same trick works
    server = uvicorn.Server(
        uvicorn.Config(app, host="127.0.0.1", port=port, log_level="warning")
    )
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.monotonic() + 10
    while not server.started and time.monotonic() < deadline:
        time.sleep(0.02)
    assert server.started, "control API failed to start"
    yield f"http://127.0.0.1:{port}", controller
    if controller.state == ServerState.RUNNING:
        controller.stop()
    server.should_exit = True
    thread.join(timeout=10)


@pytest.fixture
def client():
    controller = make_controller()
    app = create_app(controller, dashboard_dir=None)
    with TestClient(app) as test_client:
        yield test_client, controller
    if controller.state == ServerState.RUNNING:
        controller.stop()


class TestStatus:
    def test_fresh_boot(self, client):
        http, _ = client
        body = http.get("/api/status").json()
        assert body["state"] == "stopped"
        assert body["jobs_done"] == 0
        assert body["last_error"] is None
        assert body["uptime_s"] == 0.0
        assert body["effective_config"]["target_ip"] == "127.0.0.1"

    def test_after_start_running(self, client):
        http, controller = client
        body = http.post("/api/start").json()
        assert body["state"] == "running"
        assert controller.state == ServerState.RUNNING
        assert http.get("/api/status").json()["state"] == "running"
        http.post("/api/stop")

    def test_bind_failure_latches_error(self, client):
        import socket

        http, controller = client
        holder = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
        holder.bind(("127.0.0.1", controller.config.receive_port))
        try:
            body = http.post("/api/start").json()
            assert body["state"] == "stopped"
            assert "bind" in body["last_error"].lower()
        finally:
            holder.close()


class TestConfig:
    def test_set_port_while_stopped(self, client):
        http, _ = client
        response = http.put("/api/config", json={"receive_port": 3000})
        assert response.status_code == 200
        assert response.json()["effective_config"]["receive_port"] == 3000

    def test_rejected_while_running(self, client):
        http, _ = client
        http.post("/api/start")
        response = http.put("/api/config", json={"receive_port": 3000})
        assert response.status_code == 409
        http.post("/api/stop")

    def test_port_zero_field_message(self, client):
        http, _ = client
        response = http.put("/api/config", json={"receive_port": 0})
        assert response.status_code == 422
        problems = response.json()["detail"]
        assert any(
            p["field"] == "receive_port" and "port out of range" in p["message"]
            for p in problems
        )

    @pytest.mark.parametrize(
        "patch,field",
        [
            ({"send_port": 70000}, "send_port"),
            ({"target_ip": "not-an-ip"}, "target_ip"),
            ({"bind_ip": "127.0.0.3"}, "bind_ip"),  # without remote
            ({"max_qubits": 0}, "max_qubits"),
            ({"default_shots": 0}, "default_shots"),
            ({"parallel_jobs": 0}, "parallel_jobs"),
            ({"credentials": {"hub": "h"}}, "credentials"),  # empty token
        ],
    )
    def test_validation_table(self, client, patch, field):
        http, _ = client
        response = http.put("/api/config", json=patch)
        assert response.status_code == 422
        assert any(p["field"] == field for p in response.json()["detail"])

    def test_unknown_field_rejected(self, client):
        http, _ = client
        response = http.put("/api/config", json={"bogus": 1})
        assert response.status_code == 422

    def test_credentials_merge_and_redaction(self, client):
        http, _ = client
        response = http.put(
            "/api/config",
            json={"credentials": {"token": "sk-123456789", "hub": "open"}},
        )
        body = response.json()
        assert body["effective_config"]["credentials"]["token"] == "****6789"
        assert "sk-12345" not in json.dumps(body)


class TestLifecycleRoutes:
    def test_start_stop_cycle(self, client):
        http, _ = client
        assert http.post("/api/start").json()["state"] == "running"
        assert http.post("/api/stop").json()["state"] == "stopped"

    def test_double_start_conflict(self, client):
        http, _ = client
        http.post("/api/start")
        assert http.post("/api/start").status_code == 409
        http.post("/api/stop")

    def test_stop_when_stopped_conflict(self, client):
        http, _ = client
        assert http.post("/api/stop").status_code == 409

    def test_redacted_token_in_start_status(self):
        controller = make_controller(
            credentials=Credentials(token="secret-token-abcd")
        )
        app = create_app(controller, dashboard_dir=None)
        with TestClient(app) as http:
            body = http.post("/api/start").json()
            text = json.dumps(body)
            assert "secret-token" not in text
            assert body["effective_config"]["credentials"]["token"].endswith("abcd")
            http.post("/api/stop")


class TestLogStream:
    def test_boot_lines_in_order(self, live_api):
        base, controller = live_api

        received = []
        done = threading.Event()

        def consume():
            with httpx.stream("GET", f"{base}/api/logs", timeout=20) as response:
                for line in response.iter_lines():
                    if line.startswith("data: "):
                        received.append(json.loads(line[6:]))
                        if len(received) >= 2:
                            done.set()
                            return

        reader = threading.Thread(target=consume, daemon=True)
        reader.start()
        time.sleep(0.3)  # let the subscription attach
        httpx.post(f"{base}/api/start", timeout=10)
        assert done.wait(10)
        assert str(controller.config.receive_port) in received[0]["line"]
        assert "ready to exchange" in received[1]["line"]
        assert received[0]["ts"] <= received[1]["ts"]
        httpx.post(f"{base}/api/stop", timeout=10)

    def test_tail_replays_recent_events(self, live_api):
        base, _ = live_api
        httpx.post(f"{base}/api/start", timeout=10)
        httpx.post(f"{base}/api/stop", timeout=10)
        lines = []
        with httpx.stream("GET", f"{base}/api/logs", params={"tail": 100}, timeout=20) as response:
            for line in response.iter_lines():
                if line.startswith("data: "):
                    lines.append(json.loads(line[6:])["line"])
                    if len(lines) >= 3:
                        break
        assert any("ready to exchange" in line for line in lines)

    def test_burst_timestamps_monotone(self, client):
        _, controller = client
        sub = controller.logbus.subscribe(capacity=500)
        for i in range(200):
            controller.logbus.notice(f"burst {i}")
        stamps = []
        for _ in range(200):
            event = sub.get(timeout=1)
            stamps.append(event.ts)
        assert stamps == sorted(stamps)
        controller.logbus.unsubscribe(sub)

    def test_overflow_inserts_marker(self):
        bus = LogBus()
        sub = bus.subscribe(capacity=10)
        for i in range(25):
            bus.notice(f"event {i}")
        first = sub.get(timeout=1)
        assert first.level == "marker"
        assert "dropped" in first.line
        second = sub.get(timeout=1)
        assert second.line == "event 15"  # oldest surviving event
        bus.unsubscribe(sub)


def test_route_table_matches_readme():
    """The documented route table and the implementation must agree."""
    readme = Path(__file__).resolve().parents[1] / "README.md"
    documented = set(re.findall(r"(GET|PUT|POST)\s+(/api/[a-z]+)", readme.read_text()))
    app = create_app(make_controller(), dashboard_dir=None)
    implemented = set()
    for route in app.routes:
        if getattr(route, "path", "").startswith("/api/"):
            for method in route.methods - {"HEAD", "OPTIONS"}:
                implemented.add((method, route.path))
    assert documented == implemented
