"""Local HTTP JSON service powering the what-if UI.

Handlers are pure functions over an immutable loaded network, so identical
payloads always produce identical responses. The CLI `infer` and POST
/api/infer share one code path and one serializer; outputs are byte-equal.

Desk tool: binds loopback by default, no authentication.
"""

from __future__ import annotations

import logging
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import FileResponse, Response
from fastapi.staticfiles import StaticFiles

from . import jsonio
from .bp import EvidenceSet, check_evidence
from .errors import UamlError, UnknownNodeError
from .network import network_to_dict
from .session import infer_payload, load_model, scenario_rows_payload

log = logging.getLogger("uaml.server")


def _json_response(payload, status_code: int = 200) -> Response:
    return Response(content=jsonio.dumps(payload) + "\n",
                    media_type="application/json", status_code=status_code)


def _error_body(exc: Exception, status_code: int, **extra) -> Response:
    body = {"error": type(exc).__name__, "message": str(exc), **extra}
    return _json_response(body, status_code=status_code)


def create_app(model_path: str | None = None, static_dir: str | None = None) -> FastAPI:
    net = load_model(model_path)
    app = FastAPI(title="uaml", docs_url=None, redoc_url=None)

    @app.get("/api/model")
    def api_model():
        return _json_response(network_to_dict(net))

    @app.post("/api/infer")
    async def api_infer(request: Request):
        try:
            body = await request.json()
        except Exception as exc:
            return _error_body(exc, 400)
        try:
            ev = EvidenceSet.from_dict(body)
            check_evidence(net.nodes, ev)
        except UnknownNodeError as exc:
            return _error_body(exc, 400, node=exc.node)
        except (UamlError, KeyError, TypeError, ValueError) as exc:
            return _error_body(exc, 400)
        try:
            return _json_response(infer_payload(net, ev))
        except UamlError as exc:
            return _error_body(exc, 422, diagnostics={"evidence": ev.to_dict()})

    @app.get("/api/scenario/rows")
    def api_scenario_rows():
        return _json_response(scenario_rows_payload())

    static = Path(static_dir) if static_dir else Path(__file__).parent.parent.parent / "frontend" / "dist"
    if static.is_dir():
        app.mount("/", StaticFiles(directory=str(static), html=True), name="ui")
    else:
        @app.get("/")
        def index():
            return Response(content="<!doctype html><title>uaml</title>"
                                    "<p>UI bundle not built; API at /api/.</p>",
                            media_type="text/html")

    return app
