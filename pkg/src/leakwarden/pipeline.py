"""Document analysis pipeline: extraction -> cached classification -> filtering.

One DocumentAnalyzer instance is shared by the HTTP service, the CLI, and the
evaluation harness. It is safe for concurrent use: the matcher is immutable,
classifiers are stateless, and the cache synchronizes internally.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .cache import CacheKey, CacheStats, LruCache
from .catalog import CompiledMatcher, RuleCatalog, compile_catalog
from .classify import (
    Classification,
    ClassifierSpec,
    ClassifierUnavailableError,
    Finding,
    build_classifier,
    filter_findings,
    to_classification,
)
from .scanner import MAX_DOCUMENT_BYTES, Candidate, dedupe_candidates, extract_candidates


@dataclass(frozen=True)
class StageTiming:
    extraction_ms: float
    classification_ms: float
    total_ms: float


@dataclass(frozen=True)
class AnalysisResult:
    """Everything one analysis produced, cache and timing deltas included."""

    candidates: list[Candidate]
    classifications: list[Classification]
    findings: list[Finding]
    unverified: list[Candidate] = field(default_factory=list)  # degraded mode only
    timing: StageTiming = StageTiming(0.0, 0.0, 0.0)
    cache_hits: int = 0
    cache_misses: int = 0
    classifier_calls: int = 0  # items actually sent to the classifier
    degraded: bool = False
    warning: str | None = None
    catalog_version: str = ""
    classifier_id: str = ""
    threshold: float = 0.0


class DocumentAnalyzer:
    def __init__(
        self,
        catalog: RuleCatalog,
        classifier_spec: ClassifierSpec,
        *,
        cache_capacity: int | None = None,
        max_document_bytes: int = MAX_DOCUMENT_BYTES,
    ):
        self.catalog = catalog
        self.matcher: CompiledMatcher = compile_catalog(catalog)
        self.spec = classifier_spec
        self.classifier = build_classifier(classifier_spec)
        self.cache = LruCache() if cache_capacity is None else LruCache(cache_capacity)
        self.max_document_bytes = max_document_bytes

    @property
    def classifier_id(self) -> str:
        return self.classifier.classifier_id

    def cache_stats(self) -> CacheStats:
        return self.cache.stats()

    def extract(self, document: str) -> list[Candidate]:
        return dedupe_candidates(
            extract_candidates(document, self.matcher, max_bytes=self.max_document_bytes)
        )

    def analyze(self, document: str, *, threshold: float | None = None) -> AnalysisResult:
        """Run the full pipeline over one document.

        When the classifier is unreachable the result degrades honestly:
        findings stay empty, candidates come back in `unverified`, and
        `warning` explains why. Nothing is silently dropped.
        """
        effective_threshold = self.spec.threshold if threshold is None else threshold
        t0 = time.perf_counter()
        candidates = self.extract(document)
        t1 = time.perf_counter()

        hits = misses = calls = 0
        classifications: list[Classification] = []
        degraded = False
        warning = None
        try:
            classifications, hits, misses, calls = self._classify_cached(
                candidates, effective_threshold
            )
            findings = filter_findings(candidates, classifications)
            unverified: list[Candidate] = []
        except ClassifierUnavailableError as exc:
            degraded = True
            warning = f"{exc}; returning unverified regex candidates"
            classifications = []
            findings = []
            unverified = list(candidates)
        t2 = time.perf_counter()

        return AnalysisResult(
            candidates=candidates,
            classifications=classifications,
            findings=findings,
            unverified=unverified,
            timing=StageTiming(
                extraction_ms=(t1 - t0) * 1000.0,
                classification_ms=(t2 - t1) * 1000.0,
                total_ms=(t2 - t0) * 1000.0,
            ),
            cache_hits=hits,
            cache_misses=misses,
            classifier_calls=calls,
            degraded=degraded,
            warning=warning,
            catalog_version=self.catalog.version,
            classifier_id=self.classifier_id,
            threshold=effective_threshold,
        )

    def _classify_cached(
        self, candidates: list[Candidate], threshold: float
    ) -> tuple[list[Classification], int, int, int]:
        """Classify candidates through the cache; one classifier batch per analysis."""
        keys = [
            CacheKey.for_classification(c.text, c.context, self.classifier_id, threshold)
            for c in candidates
        ]
        results: list[Classification | None] = []
        hits = misses = 0
        pending: dict[CacheKey, list[int]] = {}
        for index, (candidate, key) in enumerate(zip(candidates, keys)):
            cached = self.cache.get(key)
            if cached is not None:
                hits += 1
                results.append(cached)
            else:
                misses += 1
                results.append(None)
                pending.setdefault(key, []).append(index)

        calls = 0
        if pending:
            batch_indices = [indices[0] for indices in pending.values()]
            batch = [(candidates[i].text, candidates[i].context) for i in batch_indices]
            confidences = self.classifier.score_batch(batch)
            calls = len(batch)
            for key, confidence in zip(pending.keys(), confidences):
                classification = to_classification(confidence, self.classifier_id, threshold)
                self.cache.put(key, classification)
                for index in pending[key]:
                    results[index] = classification

        return [r for r in results if r is not None], hits, misses, calls
