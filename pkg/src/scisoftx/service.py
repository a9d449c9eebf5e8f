"""Local HTTP service: JSON API over one loaded project, plus the UI assets.

Reads are served from immutable snapshots; every mutation of the link set
goes through a single lock. A graceful shutdown flushes unsaved links to the
project's XML file.
"""

from __future__ import annotations

import logging
import threading
from contextlib import asynccontextmanager
from importlib import resources
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, PlainTextResponse, Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from scisoftx.code_model import build_index, index_to_dict
from scisoftx.config import ProjectConfig
from scisoftx.document import extract_spans, model_to_dict
from scisoftx.errors import DigestMismatch, DuplicateLink, InvalidLabel, ScisoftxError
from scisoftx.graphs import GRAPH_LEVELS, build_graph
from scisoftx.links import LABELS, LinkSet, export_xml, import_xml, make_link, merge
from scisoftx.pipeline import auto_link_document

logger = logging.getLogger(__name__)


class ManualLinkIn(BaseModel):
    page: int = Field(ge=1)
    line: int = Field(ge=1)
    char_start: int = Field(ge=0)
    char_end: int = Field(ge=1)
    snippet: str
    target_qname: str
    target_file: str
    target_line: int = Field(ge=1)
    label: str


class SessionState:
    """Everything the service knows about the loaded project."""

    def __init__(self, config: ProjectConfig):
        self.config = config
        self.pdf_bytes = config.pdf_path.read_bytes()
        self.model = extract_spans(self.pdf_bytes)
        self.index = build_index(config.repo_path, config.profiles)
        self.links = self._load_links()
        self.dirty = False
        self.lock = threading.Lock()

    def _load_links(self) -> LinkSet:
        if self.config.links_path.exists():
            loaded = import_xml(self.config.links_path.read_bytes())
            if loaded.document_digest != self.model.source_digest:
                raise DigestMismatch(
                    f"{self.config.links_path} was created for a different document"
                )
            if loaded.code_digest != self.index.source_digest:
                logger.warning(
                    "links file %s was created against an older code tree; rebinding",
                    self.config.links_path,
                )
                loaded.code_digest = self.index.source_digest
            return loaded
        return LinkSet(
            document_digest=self.model.source_digest,
            code_digest=self.index.source_digest,
        )

    def export(self) -> Path:
        data = export_xml(self.links)
        self.config.links_path.write_bytes(data)
        self.dirty = False
        return self.config.links_path

    def link_payload(self) -> dict:
        return {
            "document_digest": self.links.document_digest,
            "code_digest": self.links.code_digest,
            "label_vocabulary": list(LABELS),
            "links": [_link_to_dict(link) for link in self.links.links],
        }


def _link_to_dict(link) -> dict:
    return {
        "link_id": link.link_id,
        "page": link.page,
        "line": link.line,
        "char_start": link.char_start,
        "char_end": link.char_end,
        "snippet": link.snippet,
        "target_qname": link.target_qname,
        "target_file": link.target_file,
        "target_line": link.target_line,
        "label": link.label,
        "origin": link.origin,
        "score": link.score,
    }


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"code": code, "message": message})


def _default_static_dir() -> Path:
    return Path(str(resources.files("scisoftx") / "static"))


def create_app(config: ProjectConfig) -> FastAPI:
    @asynccontextmanager
    async def lifespan(app: FastAPI):
        app.state.session = SessionState(config)
        try:
            yield
        finally:
            session = app.state.session
            if session.dirty:
                logger.info("flushing unsaved links to %s", config.links_path)
                session.export()

    app = FastAPI(title="scisoftx", lifespan=lifespan)

    @app.exception_handler(RequestValidationError)
    async def handle_validation(request: Request, exc: RequestValidationError):
        return _error(400, "ValidationError", str(exc.errors()[:3]))

    @app.exception_handler(ScisoftxError)
    async def handle_domain(request: Request, exc: ScisoftxError):
        if isinstance(exc, DuplicateLink):
            return _error(409, "DuplicateLink", str(exc))
        if isinstance(exc, InvalidLabel):
            return _error(400, "InvalidLabel", str(exc))
        return _error(400, type(exc).__name__, str(exc))

    def session() -> SessionState:
        return app.state.session

    @app.get("/api/document")
    def get_document():
        return model_to_dict(session().model)

    @app.get("/api/document/raw")
    def get_document_raw():
        return Response(content=session().pdf_bytes, media_type="application/pdf")

    @app.get("/api/code/entities")
    def get_entities():
        return index_to_dict(session().index)

    @app.get("/api/code/source")
    def get_source(file: str = ""):
        state = session()
        if not file or state.index.file_entity(file) is None:
            return _error(404, "NotFound", f"no indexed file {file!r}")
        root = Path(state.config.repo_path).resolve()
        target = (root / file).resolve()
        if not target.is_relative_to(root) or not target.is_file():
            return _error(404, "NotFound", f"no such file {file!r}")
        return PlainTextResponse(target.read_text(encoding="utf-8", errors="replace"))

    @app.get("/api/links")
    def get_links():
        return session().link_payload()

    @app.post("/api/links", status_code=201)
    def post_link(body: ManualLinkIn):
        state = session()
        try:
            link = make_link(
                page=body.page,
                line=body.line,
                char_start=body.char_start,
                char_end=body.char_end,
                snippet=body.snippet,
                target_qname=body.target_qname,
                target_file=body.target_file,
                target_line=body.target_line,
                label=body.label,
                origin="manual",
                score=0,
            )
        except ValueError as exc:
            return _error(400, "InvalidLink", str(exc))
        with state.lock:
            state.links.add_link(link)
            state.dirty = True
        return _link_to_dict(link)

    @app.delete("/api/links/{link_id}")
    def delete_link(link_id: str):
        state = session()
        with state.lock:
            removed = state.links.remove(link_id)
            if removed is None:
                return _error(404, "NotFound", f"no link with id {link_id!r}")
            state.dirty = True
        return {"deleted": link_id}

    @app.post("/api/links/auto")
    def run_auto():
        state = session()
        with state.lock:
            auto = auto_link_document(state.model, state.index, state.config.linker)
            manual = LinkSet(
                document_digest=state.links.document_digest,
                code_digest=state.links.code_digest,
                links=[l for l in state.links.links if l.origin == "manual"],
            )
            auto.params = state.config.linker
            merged = merge(auto, manual)
            merged.params = auto.params
            state.links = merged
            state.dirty = True
            payload = state.link_payload()
        payload["auto_discovered"] = len(auto.links)
        return payload

    @app.get("/api/graph")
    def get_graph(level: str = "file"):
        if level not in GRAPH_LEVELS:
            return _error(400, "InvalidLevel", f"level must be one of {GRAPH_LEVELS}")
        state = session()
        graph = build_graph(state.links, state.index, level)
        return graph.to_dict()

    @app.post("/api/export")
    def post_export():
        state = session()
        with state.lock:
            path = state.export()
            count = len(state.links)
        return {"path": str(path), "links": count}

    static_dir = config.static_dir or _default_static_dir()
    if static_dir.is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")
    return app


def serve(config: ProjectConfig, port: int) -> None:
    """Run the service until interrupted."""
    import uvicorn

    uvicorn.run(create_app(config), host="127.0.0.1", port=port, log_level="info")
