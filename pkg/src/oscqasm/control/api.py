"""HTTP control surface for the OSC server.

Routes (all JSON unless noted):

* ``GET  /api/status``  - lifecycle state, effective config, counters
* ``PUT  /api/config``  - partial config merge; 409 while running,
  422 with field-level messages on invalid values
* ``POST /api/start``   - boot the OSC server, returns latest status
* ``POST /api/stop``    - stop it, returns latest status
* ``GET  /api/logs``    - server-sent event stream of log lines

This surface binds loopback by default and is independent of the OSC
`remote` flag: the operator panel is not the performance network.
When a dashboard build directory exists it is served at ``/``.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse, StreamingResponse
from fastapi.staticfiles import StaticFiles

from ..server.controller import ConfigValidationError, ServerController
from ..server.errors import IllegalTransition
from .schemas import ConfigPatch, StatusResponse

CONTROL_HOST = "127.0.0.1"
CONTROL_PORT = 8642

SSE_KEEPALIVE_S = 15.0


def find_dashboard_dir() -> Path | None:
    """Locate a built dashboard, if any; absent is fine."""
    env = os.environ.get("OSCQASM_DASHBOARD_DIR")
    candidates = [Path(env)] if env else []
    here = Path(__file__).resolve()
    candidates.append(here.parents[3] / "frontend" / "dist")
    candidates.append(Path.cwd() / "frontend" / "dist")
    for cand in candidates:
        if cand.is_dir() and (cand / "index.html").is_file():
            return cand
    return None


def create_app(
    controller: ServerController | None = None,
    dashboard_dir: Path | None = None,
) -> FastAPI:
    ctrl = controller or ServerController()
    app = FastAPI(title="osc-qasm control", version="0.1.0")
    app.state.controller = ctrl

    @app.get("/api/status", response_model=StatusResponse)
    def get_status():
        return ctrl.get_status()

    @app.put("/api/config", response_model=StatusResponse)
    def put_config(patch: ConfigPatch):
        changes = patch.model_dump(exclude_unset=True)
        try:
            return ctrl.apply_config(changes)
        except IllegalTransition as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from None
        except ConfigValidationError as exc:
            return JSONResponse(
                status_code=422,
                content={
                    "detail": [
                        {"field": field, "message": message}
                        for field, message in exc.problems
                    ]
                },
            )

    @app.post("/api/start", response_model=StatusResponse)
    def post_start():
        try:
            return ctrl.start()
        except IllegalTransition as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from None

    @app.post("/api/stop", response_model=StatusResponse)
    def post_stop():
        try:
            return ctrl.stop()
        except IllegalTransition as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from None

    @app.get("/api/logs")
    def get_logs(tail: int = 0):
        subscription = ctrl.logbus.subscribe(tail=max(0, min(tail, 1000)))

        def stream():
            # Short waits keep the generator responsive to client
            # disconnects; keepalive comments hold idle connections open.
            idle = 0.0
            try:
                while True:
                    event = subscription.get(timeout=0.5)
                    if event is None:
                        if subscription.closed:
                            return
                        idle += 0.5
                        if idle >= SSE_KEEPALIVE_S:
                            idle = 0.0
                            yield ": keepalive\n\n"
                        continue
                    idle = 0.0
                    payload = json.dumps(
                        {"ts": event.ts, "level": event.level, "line": event.line}
                    )
                    yield f"data: {payload}\n\n"
            finally:
                ctrl.logbus.unsubscribe(subscription)

        return StreamingResponse(stream(), media_type="text/event-stream")

    static = dashboard_dir if dashboard_dir is not None else find_dashboard_dir()
    if static is not None:
        app.mount("/", StaticFiles(directory=static, html=True), name="dashboard")

    return app
