"""Local HTTP analysis service.

POST /analyze runs extraction -> cached classification -> filtering and returns
findings with per-stage timing; GET /health reports catalog, classifier, and
cache state. Field names are the wire contract (docs/protocol.md and
docs/analyze-schema.json); handlers are sync functions so the framework runs
them in its thread pool and slow classifier calls never block request intake.

Log redaction is structural and cannot be configured off: nothing above a
masked token ever reaches a log record — documents and raw matches are simply
never passed to the logger.
"""

from __future__ import annotations

import logging
import threading
import time
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .cache import DEFAULT_CAPACITY
from .catalog import load_catalog, load_default_catalog
from .classify import (
    DEFAULT_THRESHOLD,
    UNVERIFIED_LABEL,
    ClassifierSpec,
    Label,
    mask_secret,
)
from .pipeline import AnalysisResult, DocumentAnalyzer
from .scanner import MAX_DOCUMENT_BYTES

logger = logging.getLogger("leakwarden.service")

DEFAULT_HOST = "127.0.0.1"  # loopback by default: documents never leave the machine
DEFAULT_PORT = 8901


@dataclass(frozen=True)
class ServiceConfig:
    host: str = DEFAULT_HOST
    port: int = DEFAULT_PORT
    catalog_path: Path | None = None  # None -> packaged seed catalog
    classifier: str = "heuristic"  # "heuristic" | "remote"
    endpoint: str | None = None
    threshold: float = DEFAULT_THRESHOLD
    cache_capacity: int = DEFAULT_CAPACITY
    max_document_bytes: int = MAX_DOCUMENT_BYTES

    def classifier_spec(self) -> ClassifierSpec:
        return ClassifierSpec(kind=self.classifier, endpoint=self.endpoint, threshold=self.threshold)


def build_analyzer(config: ServiceConfig) -> DocumentAnalyzer:
    catalog = (
        load_catalog(config.catalog_path) if config.catalog_path else load_default_catalog()
    )
    return DocumentAnalyzer(
        catalog,
        config.classifier_spec(),
        cache_capacity=config.cache_capacity,
        max_document_bytes=config.max_document_bytes,
    )


# --- wire models (field names are the contract) ------------------------------------


class AnalyzeOptions(BaseModel):
    threshold: float | None = Field(default=None, ge=0.0, le=1.0)
    include_non_sensitive: bool = False


class AnalyzeRequest(BaseModel):
    document: str
    options: AnalyzeOptions = AnalyzeOptions()


class WireFinding(BaseModel):
    span_start: int
    span_end: int
    rule_id: str
    label: str  # "Secret" | "NonSensitive" | "Unverified"
    confidence: float | None
    masked_text: str


class WireTiming(BaseModel):
    extraction_ms: float
    classification_ms: float
    total_ms: float


class WireCacheDelta(BaseModel):
    hits: int
    misses: int


class AnalyzeResponse(BaseModel):
    findings: list[WireFinding]
    timing: WireTiming
    cache: WireCacheDelta
    catalog_version: str
    classifier_id: str
    warning: str | None = None


class HealthCache(BaseModel):
    hits: int
    misses: int
    evictions: int
    size: int
    capacity: int


class HealthResponse(BaseModel):
    status: str
    catalog_version: str
    classifier_id: str
    rules_enabled: int
    cache: HealthCache
    uptime_s: float


def _wire_findings(result: AnalysisResult, include_non_sensitive: bool) -> list[WireFinding]:
    entries: list[WireFinding] = []
    if result.degraded:
        for candidate in result.unverified:
            entries.append(
                WireFinding(
                    span_start=candidate.start,
                    span_end=candidate.end,
                    rule_id=candidate.rule_id,
                    label=UNVERIFIED_LABEL,
                    confidence=None,
                    masked_text=mask_secret(candidate.text),
                )
            )
        return entries
    for candidate, classification in zip(result.candidates, result.classifications):
        if classification.label is not Label.SECRET and not include_non_sensitive:
            continue
        entries.append(
            WireFinding(
                span_start=candidate.start,
                span_end=candidate.end,
                rule_id=candidate.rule_id,
                label=classification.label.value,
                confidence=classification.confidence,
                masked_text=mask_secret(candidate.text),
            )
        )
    return entries


def create_app(config: ServiceConfig | None = None, analyzer: DocumentAnalyzer | None = None) -> FastAPI:
    """Service factory; `analyzer` can be injected directly (tests, stub classifiers)."""
    config = config or ServiceConfig()
    if analyzer is None:
        analyzer = build_analyzer(config)

    app = FastAPI(title="leakwarden", version="0.1.0", docs_url=None, redoc_url=None)
    app.state.analyzer = analyzer
    app.state.started = time.monotonic()

    @app.post("/analyze", response_model=AnalyzeResponse)
    def analyze(request: AnalyzeRequest) -> AnalyzeResponse:
        document_bytes = len(request.document.encode("utf-8"))
        if document_bytes > analyzer.max_document_bytes:
            raise HTTPException(
                status_code=413,
                detail=f"document is {document_bytes} bytes; limit is {analyzer.max_document_bytes}",
            )
        result = analyzer.analyze(request.document, threshold=request.options.threshold)
        entries = _wire_findings(result, request.options.include_non_sensitive)
        if result.degraded:
            logger.warning(
                "degraded analysis: %s (candidates=%d)", result.warning, len(result.unverified)
            )
        logger.info(
            "analyzed %d bytes: candidates=%d findings=%d cache=%d/%d total_ms=%.1f",
            document_bytes,
            len(result.candidates),
            len(result.findings),
            result.cache_hits,
            result.cache_hits + result.cache_misses,
            result.timing.total_ms,
        )
        for entry in entries:
            logger.info(
                "finding rule=%s span=[%d,%d) label=%s masked=%s",
                entry.rule_id,
                entry.span_start,
                entry.span_end,
                entry.label,
                entry.masked_text,
            )
        return AnalyzeResponse(
            findings=entries,
            timing=WireTiming(
                extraction_ms=result.timing.extraction_ms,
                classification_ms=result.timing.classification_ms,
                total_ms=result.timing.total_ms,
            ),
            cache=WireCacheDelta(hits=result.cache_hits, misses=result.cache_misses),
            catalog_version=result.catalog_version,
            classifier_id=result.classifier_id,
            warning=result.warning,
        )

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        stats = analyzer.cache_stats()
        return HealthResponse(
            status="ok",
            catalog_version=analyzer.catalog.version,
            classifier_id=analyzer.classifier_id,
            rules_enabled=len(analyzer.catalog.enabled_rules()),
            cache=HealthCache(
                hits=stats.hits,
                misses=stats.misses,
                evictions=stats.evictions,
                size=stats.size,
                capacity=stats.capacity,
            ),
            uptime_s=time.monotonic() - app.state.started,
        )

    return app


class EphemeralServer:
    """uvicorn in a daemon thread, for benchmarks and integration tests.

    Binds port 0 by default so parallel test runs never collide; the resolved
    base URL is available once the context is entered.
    """

    def __init__(self, app: FastAPI, host: str = DEFAULT_HOST, port: int = 0):
        import uvicorn

        self._config = uvicorn.Config(app, host=host, port=port, log_level="warning")
        self._server = uvicorn.Server(self._config)
        self._thread = threading.Thread(target=self._server.run, daemon=True)
        self.base_url = ""

    def __enter__(self) -> "EphemeralServer":
        self._thread.start()
        deadline = time.monotonic() + 10.0
        while not self._server.started:
            if time.monotonic() > deadline or not self._thread.is_alive():
                raise RuntimeError("service failed to start")
            time.sleep(0.01)
        sock = self._server.servers[0].sockets[0]
        host, port = sock.getsockname()[:2]
        self.base_url = f"http://{host}:{port}"
        return self

    def __exit__(self, *exc_info) -> None:
        self._server.should_exit = True
        self._thread.join(timeout=10.0)
