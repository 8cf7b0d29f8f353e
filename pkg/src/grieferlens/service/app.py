"""HTTP service exposing match ingestion, replay payloads, and annotations.

All responses are JSON; errors use the envelope
``{"error": {"code", "message", "path"}}``. Read endpoints are pure functions
of the stored match, the pinned config, and the annotation log.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Query, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from ..errors import (
    BadTime,
    BadWindow,
    GrieferLensError,
    InvariantViolation,
    MalformedInput,
    SchemaViolation,
    UnknownPlayer,
)
from .store import Conflict, MatchStore, NotFound

_BAD_REQUEST = (MalformedInput, SchemaViolation, InvariantViolation, BadWindow, BadTime)


def _error_response(exc: GrieferLensError, status: int) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"error": {"code": exc.code, "message": exc.message, "path": exc.path}},
    )


def create_app(store: MatchStore, frontend_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="grieferlens", docs_url=None, redoc_url=None)

    @app.exception_handler(RequestValidationError)
    async def _handle_request_validation(_request: Request, exc: RequestValidationError):
        first = exc.errors()[0] if exc.errors() else {}
        path = ".".join(str(p) for p in first.get("loc", ()))
        return JSONResponse(
            status_code=400,
            content={
                "error": {
                    "code": "schema_violation",
                    "message": first.get("msg", "invalid request"),
                    "path": path or None,
                }
            },
        )

    @app.exception_handler(GrieferLensError)
    async def _handle_domain_error(_request: Request, exc: GrieferLensError):
        if isinstance(exc, NotFound):
            return _error_response(exc, 404)
        if isinstance(exc, Conflict):
            return _error_response(exc, 409)
        if isinstance(exc, UnknownPlayer):
            return _error_response(exc, 404)
        if isinstance(exc, _BAD_REQUEST):
            return _error_response(exc, 400)
        return _error_response(exc, 500)

    @app.get("/health")
    async def health():
        return {"status": "ok", "config_hash": store.config_hash}

    @app.post("/matches")
    async def ingest(request: Request, response: Response):
        raw = await request.body()
        try:
            match_id, created = store.ingest(raw)
        except UnknownPlayer as exc:
            # a bad reference inside the document is a validation failure
            return _error_response(exc, 400)
        response.status_code = 201 if created else 200
        return {"match_id": match_id}

    @app.get("/matches")
    async def list_matches():
        return {"match_ids": store.match_ids()}

    @app.get("/matches/{match_id}/summary")
    async def summary(match_id: str):
        return store.summaries_doc(match_id)

    @app.get("/matches/{match_id}/timeline")
    async def timeline(match_id: str, player: str):
        return store.timeline(match_id, player)

    @app.get("/matches/{match_id}/heatmap")
    async def heatmap(
        match_id: str,
        player: str,
        t0: float = Query(alias="from"),
        t1: float = Query(alias="to"),
        grid: int = 64,
    ):
        return store.heatmap(match_id, player, t0, t1, grid)

    @app.get("/matches/{match_id}/trajectory")
    async def player_trajectory(
        match_id: str,
        player: str,
        t0: float = Query(alias="from"),
        t1: float = Query(alias="to"),
    ):
        return store.player_trajectory(match_id, player, t0, t1)

    @app.post("/matches/{match_id}/annotations")
    async def add_annotation(match_id: str, request: Request, response: Response):
        try:
            body = await request.json()
        except Exception as exc:
            raise MalformedInput(f"invalid JSON body: {exc}") from exc
        record = store.add_annotation(match_id, body)
        response.status_code = 201
        return record

    @app.get("/matches/{match_id}/annotations")
    async def list_annotations(match_id: str):
        return {"annotations": store.list_annotations(match_id)}

    @app.delete("/matches/{match_id}/annotations/{annotation_id}")
    async def delete_annotation(match_id: str, annotation_id: str):
        store.delete_annotation(match_id, annotation_id)
        return {"annotation_id": annotation_id, "deleted": True}

    @app.get("/matches/{match_id}/labels/export")
    async def export_labels(match_id: str):
        return store.export_labels(match_id)

    if frontend_dir and Path(frontend_dir).is_dir():
        app.mount("/", StaticFiles(directory=frontend_dir, html=True), name="frontend")

    return app
