"""HTTP JSON API over the annotation store, plus static hosting for the UI.

Endpoints:
  GET  /api/annotators/{id}/next      next pending task for the annotator
  POST /api/tasks/{id}/submission     submit labels + flags for a task
  GET  /api/disagreements             round-1 label/flag disagreements
  GET  /api/report                    agreement + duration report
  GET  /api/export                    dataset stream, one JSON record per line
"""

import os

from fastapi import FastAPI
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from srcmine.annotation.store import (
    AnnotationError,
    AnnotationStore,
    InvalidSubmission,
    LabelSubmission,
    NotTaskOwner,
    UnknownAnnotator,
    UnknownTask,
)
from srcmine.readme.dataset import record_to_json
from srcmine.readme.segment import CATEGORIES


class SubmissionBody(BaseModel):
    annotator_id: str
    labels: list[str] = []
    non_english: bool = False
    too_simple: bool = False
    duration_seconds: float = 0.0


def _task_view(store: AnnotationStore, task) -> dict:
    unit = store.unit_for_task(task)
    counts = store.counts(task.annotator_id)
    return {
        "task_id": task.task_id,
        "repo_url": task.repo_url,
        "unit_index": task.unit_index,
        "round": task.round,
        "header_text": unit.header_text,
        "header_level": unit.header_level,
        "subtext": unit.subtext,
        "position": {
            "done": counts["submitted"],
            "total": counts["created"],
        },
        "categories": list(CATEGORIES),
    }


def create_app(store: AnnotationStore, ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="readme labeler service")

    @app.exception_handler(AnnotationError)
    async def _annotation_error(_, exc: AnnotationError):
        status = 500
        if isinstance(exc, (UnknownTask, UnknownAnnotator)):
            status = 404
        elif isinstance(exc, NotTaskOwner):
            status = 403
        elif isinstance(exc, InvalidSubmission):
            status = 422
        return JSONResponse(status_code=status, content={"error": str(exc)})

    @app.get("/api/annotators/{annotator_id}/next")
    def next_task(annotator_id: str):
        task = store.next_task(annotator_id)
        if task is None:
            return {"task": None, "counts": store.counts(annotator_id)}
        return {"task": _task_view(store, task), "counts": store.counts(annotator_id)}

    @app.post("/api/tasks/{task_id}/submission")
    def submit(task_id: str, body: SubmissionBody):
        ack = store.submit(
            body.annotator_id,
            LabelSubmission(
                task_id=task_id,
                labels=frozenset(body.labels),
                non_english=body.non_english,
                too_simple=body.too_simple,
                duration_seconds=body.duration_seconds,
            ),
        )
        return ack

    @app.get("/api/disagreements")
    def disagreements():
        return store.disagreements()

    @app.get("/api/report")
    def report():
        return store.agreement_report()

    @app.get("/api/export")
    def export():
        result = store.export_dataset()
        lines = [record_to_json(r) for r in result["records"]]
        return PlainTextResponse(
            "\n".join(lines) + ("\n" if lines else ""),
            media_type="application/x-ndjson",
            headers={
                "X-Excluded-Pending": str(result["excluded_pending"]),
                "X-Duplicate-Groups": str(len(result["duplicate_urls"])),
            },
        )

    if ui_dir and os.path.isdir(ui_dir):
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="labeler-ui")
    return app
