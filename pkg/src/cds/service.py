"""HTTP facade over catalog, critique, store, analytics and report.

Every endpoint is a thin wrapper over the corresponding module contract;
nothing here computes scores or validates sheets independently. Bodies use
the critique record schema verbatim: the wire format is the storage format.

Error bodies are ``{"error": {"code", "message", "details"}}`` with status
codes: 400 malformed body, 404 unknown id, 409 immutability/mismatch,
422 failed domain preconditions.
"""
from __future__ import annotations

import hashlib
import json
from typing import Optional, Union

from fastapi import FastAPI, Query, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import analytics
from .catalog import HeuristicCatalog, load_catalog
from .critique import CritiqueSheet, compute_score, diff, new_draft
from .errors import (
    AnalyticsError,
    CatalogMismatchError,
    CdsError,
    DuplicateWordError,
    ImmutableSheetError,
    IncompleteSheetError,
    NotFinalizedError,
    RecordNotFoundError,
    SchemaError,
    SheetMismatchError,
    StoreError,
    UnknownWordError,
)
from .report import render_html, render_markdown
from .store import CritiqueStore, InMemoryStore

_STATUS_BY_ERROR = [
    (RecordNotFoundError, 404),
    (ImmutableSheetError, 409),
    (SheetMismatchError, 409),
    (CatalogMismatchError, 409),
    (IncompleteSheetError, 422),
    (NotFinalizedError, 422),
    (AnalyticsError, 422),
    (UnknownWordError, 422),
    (DuplicateWordError, 422),
    (SchemaError, 400),
    (StoreError, 400),
]


def _error_response(exc: CdsError, status: int) -> JSONResponse:
    details = {}
    if isinstance(exc, IncompleteSheetError):
        details = {"missing": exc.problems, "unset_numbers": exc.unset_numbers}
    return JSONResponse(
        status_code=status,
        content={"error": {"code": exc.code, "message": str(exc), "details": details}},
    )


def create_app(
    store: Union[CritiqueStore, InMemoryStore, None] = None,
    catalog: Optional[HeuristicCatalog] = None,
    ui_origin: Optional[str] = None,
) -> FastAPI:
    cat = catalog or load_catalog()
    repo = store if store is not None else CritiqueStore()
    app = FastAPI(title="CDS critique service", version="0.1.0")

    if ui_origin:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=[ui_origin],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    catalog_body = json.dumps(cat.to_dict(), indent=2).encode("utf-8")
    catalog_etag = '"' + hashlib.sha256(catalog_body).hexdigest() + '"'

    @app.exception_handler(CdsError)
    async def _domain_error(request: Request, exc: CdsError):
        for klass, status in _STATUS_BY_ERROR:
            if isinstance(exc, klass):
                return _error_response(exc, status)
        return _error_response(exc, 422)

    @app.exception_handler(RequestValidationError)
    async def _malformed_body(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={
                "error": {
                    "code": "malformed_body",
                    "message": "request body is not valid JSON for this endpoint",
                    "details": {},
                }
            },
        )

    @app.exception_handler(ValueError)
    async def _value_error(request: Request, exc: ValueError):
        return JSONResponse(
            status_code=422,
            content={"error": {"code": "invalid_value", "message": str(exc), "details": {}}},
        )

    # -- catalog -----------------------------------------------------------

    @app.api_route("/api/catalog", methods=["GET", "HEAD"])
    def get_catalog(request: Request):
        if request.headers.get("if-none-match") == catalog_etag:
            return Response(status_code=304, headers={"ETag": catalog_etag})
        return Response(
            content=catalog_body if request.method == "GET" else None,
            media_type="application/json",
            headers={"ETag": catalog_etag, "Content-Length": str(len(catalog_body))},
        )

    # -- critique lifecycle --------------------------------------------------

    @app.post("/api/critiques", status_code=201)
    def create_critique(body: dict):
        if "responses" in body or "sheet_id" in body:
            # Full record document: validate and store as-is (import path).
            sheet = CritiqueSheet.from_dict(body)
        else:
            artefact_key = body.get("artefact_key")
            appraiser = body.get("appraiser", "")
            if not isinstance(artefact_key, str) or not artefact_key.strip():
                raise SchemaError("artefact_key must be a non-empty string")
            if not isinstance(appraiser, str):
                raise SchemaError("appraiser must be a string")
            sheet = new_draft(artefact_key, appraiser, cat)
        sheet_id = repo.save(sheet)
        return repo.load_sheet(sheet_id).to_dict()

    @app.get("/api/critiques")
    def list_critiques(artefact_key: str = Query(...)):
        return [h.to_dict() for h in repo.history(artefact_key, cat)]

    @app.get("/api/critiques/{sheet_id}")
    def get_critique(sheet_id: str):
        return repo.load_sheet(sheet_id).to_dict()

    @app.put("/api/critiques/{sheet_id}")
    def put_critique(sheet_id: str, body: dict):
        stored = repo.load_sheet(sheet_id)
        if stored.is_finalized:
            raise ImmutableSheetError(
                f"sheet {sheet_id} is finalized and cannot be replaced"
            )
        incoming = CritiqueSheet.from_dict(body)
        if incoming.sheet_id != sheet_id:
            raise SchemaError(
                f"body sheet_id {incoming.sheet_id!r} does not match URL {sheet_id!r}"
            )
        if incoming.is_finalized:
            # State changes go through the finalize endpoint only.
            raise SchemaError("PUT cannot set status to finalized; POST .../finalize")
        repo.save(incoming)
        return repo.load_sheet(sheet_id).to_dict()

    @app.delete("/api/critiques/{sheet_id}", status_code=204)
    def delete_critique(sheet_id: str):
        repo.delete(sheet_id)
        return Response(status_code=204)

    @app.post("/api/critiques/{sheet_id}/finalize")
    def finalize_critique(sheet_id: str):
        sheet = repo.load_sheet(sheet_id)
        sheet.finalize()  # raises IncompleteSheetError -> 422 with missing list
        repo.save(sheet)
        return repo.load_sheet(sheet_id).to_dict()

    # -- derived views ---------------------------------------------------------

    @app.get("/api/critiques/{sheet_id}/score")
    def get_score(sheet_id: str):
        sheet = repo.load_sheet(sheet_id)
        return compute_score(sheet, cat).to_dict()

    @app.get("/api/diff")
    def get_diff(earlier: str = Query(..., alias="from"), later: str = Query(..., alias="to")):
        a = repo.load_sheet(earlier)
        b = repo.load_sheet(later)
        return diff(a, b).to_dict()

    @app.get("/api/critiques/{sheet_id}/report")
    def get_report(sheet_id: str, format: str = Query("md")):
        sheet = repo.load_sheet(sheet_id)
        if format == "md":
            return Response(
                content=render_markdown(sheet, cat), media_type="text/markdown"
            )
        if format == "html":
            return Response(content=render_html(sheet, cat), media_type="text/html")
        raise SchemaError(f"unknown report format {format!r}; use md or html")

    # -- analytics ---------------------------------------------------------------

    @app.post("/api/analytics/alpha")
    def post_alpha(body: dict):
        rows = body.get("rows")
        if not isinstance(rows, list):
            raise SchemaError("body must carry 'rows': a list of numeric lists")
        return analytics.cronbach_alpha(rows).to_dict()

    @app.post("/api/analytics/ttest")
    def post_ttest(body: dict):
        g1, g2 = body.get("group1"), body.get("group2")
        if not isinstance(g1, list) or not isinstance(g2, list):
            raise SchemaError("body must carry 'group1' and 'group2' lists")
        welch = bool(body.get("welch", False))
        return analytics.t_test_independent(g1, g2, welch=welch).to_dict()

    @app.get("/api/analytics/word-frequencies")
    def get_word_frequencies(artefact_key: Optional[str] = None):
        keys = [artefact_key] if artefact_key else repo.artefact_keys()
        sheets = []
        for key in keys:
            for header in repo.history(key, cat):
                if header.status == "finalized":
                    sheets.append(repo.load_sheet(header.sheet_id))
        table = analytics.word_frequencies(sheets, cat)
        return [
            {"group": g, "stimulus": s, "word": w, "count": c}
            for g, s, w, c in table.rows()
        ]

    return app


def run(
    addr: str = "127.0.0.1",
    port: int = 8787,
    store_dir: Optional[str] = None,
    ui_origin: Optional[str] = None,
    static_dir: Optional[str] = None,
) -> None:
    """Serve the API (and optionally a built UI bundle) with uvicorn."""
    import uvicorn

    app = create_app(store=CritiqueStore(store_dir), ui_origin=ui_origin)
    if static_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")
    uvicorn.run(app, host=addr, port=port, log_level="info")
