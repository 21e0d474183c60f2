"""HTTP JSON API backing the curation console.

Endpoints:
    GET  /api/batches                  -> [{"batch_id", "status"}]
    GET  /api/batches/{id}             -> full batch document
    POST /api/batches/{id}/curation    -> validate and persist a curation
    GET  /api/batches/{id}/export      -> final three-question quiz JSON

Errors: 404 unknown batch, 409 wrong batch state, 422 validation failure
with the violation list. A static UI bundle directory can be mounted at /.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .curation import BatchStore, batch_to_dict, result_from_dict
from .errors import (
    AlreadyCuratedError,
    CurationRejectedError,
    DataFormatError,
    NotCuratedError,
    UnknownBatchError,
)


def create_app(data_dir: str | Path, ui_dir: str | Path | None = None) -> FastAPI:
    store = BatchStore(data_dir)
    app = FastAPI(title="quizsmith curation", docs_url=None, redoc_url=None)

    @app.exception_handler(UnknownBatchError)
    async def _unknown(request: Request, exc: UnknownBatchError):
        return JSONResponse(status_code=404, content={"error": str(exc)})

    @app.exception_handler(AlreadyCuratedError)
    async def _already(request: Request, exc: AlreadyCuratedError):
        return JSONResponse(status_code=409, content={"error": str(exc)})

    @app.exception_handler(NotCuratedError)
    async def _open(request: Request, exc: NotCuratedError):
        return JSONResponse(status_code=409, content={"error": str(exc)})

    @app.exception_handler(CurationRejectedError)
    async def _rejected(request: Request, exc: CurationRejectedError):
        return JSONResponse(
            status_code=422, content={"error": str(exc), "violations": exc.violations}
        )

    @app.exception_handler(DataFormatError)
    async def _malformed(request: Request, exc: DataFormatError):
        return JSONResponse(
            status_code=422, content={"error": str(exc), "violations": ["MALFORMED_BODY"]}
        )

    @app.get("/api/batches")
    def list_batches():
        return store.list_batches()

    @app.get("/api/batches/{batch_id}")
    def get_batch(batch_id: str):
        batch, curation = store.load(batch_id)
        return batch_to_dict(batch, curation)

    @app.post("/api/batches/{batch_id}/curation")
    async def submit_curation(batch_id: str, request: Request):
        body = await request.json()
        if not isinstance(body, dict):
            raise DataFormatError("curation body must be a JSON object")
        body.setdefault("batch_id", batch_id)
        result = result_from_dict(body)
        batch = store.submit_curation(batch_id, result)
        return {"batch_id": batch.batch_id, "status": batch.status}

    @app.get("/api/batches/{batch_id}/export")
    def export(batch_id: str):
        return store.export(batch_id)

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def serve(port: int, data_dir: str | Path, ui_dir: str | Path | None = None, host: str = "127.0.0.1") -> None:
    """Run the curation service until interrupted."""
    import uvicorn

    uvicorn.run(create_app(data_dir, ui_dir), host=host, port=port, log_level="info")
