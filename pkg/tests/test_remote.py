import json
import time

import pytest

from oscqasm.qasm import compile_source
from oscqasm.server import (
    AuthFailed,
    Credentials,
    MockProvider,
    MockProviderService,
    OscQasmServer,
    RemoteRejected,
    RemoteTimeout,
    ServerConfig,
    submit_remote,
)
from oscqasm.sim import run

from conftest import free_udp_port
from test_server import collect_until_terminal, send_qutune

TOKEN = "sk-mock-test-4242"


@pytest.fixture
def mock_service():
    service = MockProviderService(token=TOKEN, seed=7)
    base_url = service.start()
    yield service, base_url
    service.stop()


class TestMockProviderHttp:
    def test_submit_poll_fetch_round_trip(self, mock_service, bell_source):
        _, base_url = mock_service
        provider = MockProvider(base_url)
        counts = submit_remote(provider, bell_source, 256, "mock_remote", Credentials(token=TOKEN))
        assert sum(counts.values()) == 256
        # the mock delegates to the embedded simulator with its own seed
        assert counts == run(compile_source(bell_source), 256, seed=7)
        provider.close()

    def test_empty_token_fails_before_any_network_call(self, bell_source):
        provider = MockProvider("http://127.0.0.1:9")  # nothing listens here
        with pytest.raises(AuthFailed):
            submit_remote(provider, bell_source, 16, "mock_remote", Credentials(token=""))
        with pytest.raises(AuthFailed):
            submit_remote(provider, bell_source, 16, "mock_remote", None)
        provider.close()

    def test_wrong_token_is_auth_failed(self, mock_service, bell_source):
        _, base_url = mock_service
        provider = MockProvider(base_url)
        with pytest.raises(AuthFailed):
            submit_remote(provider, bell_source, 16, "mock_remote", Credentials(token="wrong"))
        provider.close()

    def test_stalled_job_times_out_at_budget(self, bell_source):
        service = MockProviderService(token=TOKEN, stall=True)
        base_url = service.start()
        provider = MockProvider(base_url)
        started = time.monotonic()
        try:
            with pytest.raises(RemoteTimeout):
                submit_remote(
                    provider, bell_source, 16, "mock_remote",
                    Credentials(token=TOKEN), poll_budget_s=1.0,
                )
            elapsed = time.monotonic() - started
            assert 0.9 <= elapsed < 5.0
        finally:
            provider.close()
            service.stop()

    def test_bad_program_surfaces_as_rejected(self, mock_service):
        _, base_url = mock_service
        provider = MockProvider(base_url)
        with pytest.raises(RemoteRejected):
            submit_remote(
                provider, "OPENQASM 2.0; nonsense", 16, "mock_remote", Credentials(token=TOKEN)
            )
        provider.close()

    def test_canned_counts(self, bell_source):
        service = MockProviderService(token=TOKEN, canned_counts={"00": 10, "11": 6})
        base_url = service.start()
        provider = MockProvider(base_url)
        try:
            counts = submit_remote(provider, bell_source, 16, "mock_remote", Credentials(token=TOKEN))
            assert counts == {"00": 10, "11": 6}
        finally:
            provider.close()
            service.stop()

    def test_latency_is_respected(self, mock_service, bell_source):
        service = MockProviderService(token=TOKEN, latency_s=0.3, seed=1)
        base_url = service.start()
        provider = MockProvider(base_url)
        started = time.monotonic()
        try:
            submit_remote(provider, bell_source, 16, "mock_remote", Credentials(token=TOKEN))
            assert time.monotonic() - started >= 0.3
        finally:
            provider.close()
            service.stop()


class TestServerRemoteDispatch:
    @pytest.fixture
    def remote_server(self, reply_listener, mock_service):
        _, base_url = mock_service
        provider = MockProvider(base_url)
        config = ServerConfig(
            receive_port=free_udp_port(),
            send_port=reply_listener.port,
            credentials=Credentials(token=TOKEN),
            seed=7,
            remote_timeout_s=5.0,
        )
        server = OscQasmServer(config, provider=provider)
        server.start()
        yield server, config.receive_port, reply_listener
        if server.state.value == "running":
            server.stop()
        provider.close()

    def test_bell_on_mock_backend_matches_local_simulator(self, remote_server, bell_source):
        server, rport, listener = remote_server
        send_qutune(rport, bell_source, 256, "mock_remote")
        remote_counts = json.loads(collect_until_terminal(listener)[-1].args[0])
        send_qutune(rport, bell_source, 256, "qasm_simulator")
        local_counts = json.loads(collect_until_terminal(listener)[-1].args[0])
        assert remote_counts == local_counts  # same seed on both sides

    def test_auth_failure_surfaces_as_error_reply(self, reply_listener, mock_service, bell_source):
        _, base_url = mock_service
        provider = MockProvider(base_url)
        config = ServerConfig(
            receive_port=free_udp_port(),
            send_port=reply_listener.port,
            credentials=Credentials(token="not-the-right-token"),
        )
        server = OscQasmServer(config, provider=provider)
        server.start()
        try:
            send_qutune(config.receive_port, bell_source, 16, "mock_remote")
            msg = collect_until_terminal(reply_listener)[-1]
            assert msg.address == "/error"
            assert msg.args[0].startswith("AuthFailed")
        finally:
            server.stop()
            provider.close()

    def test_timeout_surfaces_as_error_reply(self, reply_listener, bell_source):
        service = MockProviderService(token=TOKEN, stall=True)
        base_url = service.start()
        provider = MockProvider(base_url)
        config = ServerConfig(
            receive_port=free_udp_port(),
            send_port=reply_listener.port,
            credentials=Credentials(token=TOKEN),
            remote_timeout_s=1.0,
        )
        server = OscQasmServer(config, provider=provider)
        server.start()
        try:
            send_qutune(config.receive_port, bell_source, 16, "mock_remote")
            msg = collect_until_terminal(reply_listener, timeout=10)[-1]
            assert msg.address == "/error"
            assert msg.args[0].startswith("RemoteTimeout")
        finally:
            server.stop()
            provider.close()
            service.stop()
