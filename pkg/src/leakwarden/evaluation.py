"""Labeled-corpus evaluation and latency benchmarking.

Compares the regex-only baseline (every candidate treated as a finding)
against the full pipeline on span-annotated documents, producing per-class
precision/recall/F1 plus macro averages. Matching between predictions and
annotations is span-equality: strictest and exactly reproducible.

Conventions, since placeholder-only corpora exercise them:
  * precision with no predictions (tp+fp == 0) is 1.0; recall with no
    positive annotations (tp+fn == 0) likewise.
  * F1 is 0 when precision + recall is 0.
"""

from __future__ import annotations

import json
import math
import statistics
import time
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, Sequence

import httpx

from .classify import Finding, Label
from .pipeline import DocumentAnalyzer
from .scanner import Candidate


@dataclass(frozen=True)
class Annotation:
    start: int  # byte offsets, same convention as candidate spans
    end: int
    label: str  # "Secret" | "NonSensitive"

    def __post_init__(self) -> None:
        if self.start < 0 or self.end <= self.start:
            raise ValueError(f"invalid annotation span [{self.start}, {self.end})")
        if self.label not in (Label.SECRET.value, Label.NON_SENSITIVE.value):
            raise ValueError(f"invalid annotation label {self.label!r}")


@dataclass(frozen=True)
class LabeledDocument:
    id: str
    text: str
    annotations: tuple[Annotation, ...]


@dataclass(frozen=True)
class LabeledCorpus:
    documents: tuple[LabeledDocument, ...]

    def __len__(self) -> int:
        return len(self.documents)


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0

    def __post_init__(self) -> None:
        if min(self.tp, self.fp, self.fn, self.tn) < 0:
            raise ValueError("confusion counts must be non-negative")

    def __add__(self, other: "ConfusionCounts") -> "ConfusionCounts":
        return ConfusionCounts(
            tp=self.tp + other.tp,
            fp=self.fp + other.fp,
            fn=self.fn + other.fn,
            tn=self.tn + other.tn,
        )


@dataclass(frozen=True)
class Metrics:
    precision: float
    recall: float
    f1: float


def precision_recall_f1(counts: ConfusionCounts) -> Metrics:
    """Metrics from counts, with the documented 0/0 -> 1.0 convention."""
    precision = counts.tp / (counts.tp + counts.fp) if (counts.tp + counts.fp) else 1.0
    recall = counts.tp / (counts.tp + counts.fn) if (counts.tp + counts.fn) else 1.0
    f1 = f1_from(precision, recall)
    return Metrics(precision=precision, recall=recall, f1=f1)


def f1_from(precision: float, recall: float) -> float:
    """Harmonic mean; 0 when both components are 0."""
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def macro_average(per_class: Sequence[Metrics]) -> Metrics:
    """Unweighted arithmetic mean of each metric across classes."""
    if not per_class:
        raise ValueError("macro average over zero classes")
    n = len(per_class)
    return Metrics(
        precision=sum(m.precision for m in per_class) / n,
        recall=sum(m.recall for m in per_class) / n,
        f1=sum(m.f1 for m in per_class) / n,
    )


def _span_of(prediction) -> tuple[int, int]:
    if isinstance(prediction, Finding):
        return (prediction.candidate.start, prediction.candidate.end)
    if isinstance(prediction, Candidate):
        return (prediction.start, prediction.end)
    start, end = prediction
    return (int(start), int(end))


def match_predictions(findings: Iterable, annotations: Sequence[Annotation]) -> ConfusionCounts:
    """Span-equality confusion counts for one document.

    `findings` may be Finding or Candidate objects, or bare (start, end) spans
    (the regex-only baseline passes candidates directly).
    """
    predicted = {_span_of(f) for f in findings}
    for span in predicted:
        if span[0] < 0 or span[1] <= span[0]:
            raise ValueError(f"invalid finding span {span}")
    secret_spans = {(a.start, a.end) for a in annotations if a.label == Label.SECRET.value}
    benign_spans = {(a.start, a.end) for a in annotations if a.label == Label.NON_SENSITIVE.value}

    tp = len(predicted & secret_spans)
    fp = len(predicted - secret_spans)
    fn = len(secret_spans - predicted)
    tn = len(benign_spans - predicted)
    return ConfusionCounts(tp=tp, fp=fp, fn=fn, tn=tn)


def _benign_class_counts(findings: Iterable, annotations: Sequence[Annotation]) -> ConfusionCounts:
    """Counts with NonSensitive as the positive class (for per-class reporting)."""
    predicted = {_span_of(f) for f in findings}
    secret_spans = {(a.start, a.end) for a in annotations if a.label == Label.SECRET.value}
    benign_spans = {(a.start, a.end) for a in annotations if a.label == Label.NON_SENSITIVE.value}
    return ConfusionCounts(
        tp=len(benign_spans - predicted),  # benign annotation left unflagged
        fp=len(secret_spans - predicted),  # secret wrongly "predicted benign"
        fn=len(benign_spans & predicted),  # benign annotation flagged
        tn=len(secret_spans & predicted),
    )


@dataclass(frozen=True)
class PipelineScores:
    secret: Metrics
    non_sensitive: Metrics
    macro: Metrics
    secret_counts: ConfusionCounts
    n_predictions: int


@dataclass(frozen=True)
class EvalReport:
    regex_only: PipelineScores
    pipeline: PipelineScores
    documents: int
    candidates: int
    warnings: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return asdict(self)


def _score(secret_counts: ConfusionCounts, benign_counts: ConfusionCounts, n_pred: int) -> PipelineScores:
    secret = precision_recall_f1(secret_counts)
    benign = precision_recall_f1(benign_counts)
    return PipelineScores(
        secret=secret,
        non_sensitive=benign,
        macro=macro_average([secret, benign]),
        secret_counts=secret_counts,
        n_predictions=n_pred,
    )


def evaluate_pipeline(corpus: LabeledCorpus, analyzer: DocumentAnalyzer) -> EvalReport:
    """Regex-only baseline vs full pipeline, side by side, over one corpus.

    A conforming corpus has every Secret annotation span matched by some
    catalog rule (so the baseline's recall is 1.0 by construction); Secret
    annotations the rules miss are reported in `warnings`, not dropped.
    """
    base_secret = base_benign = pipe_secret = pipe_benign = ConfusionCounts()
    n_base = n_pipe = n_candidates = 0
    warnings: list[str] = []

    for doc in corpus.documents:
        result = analyzer.analyze(doc.text)
        candidates = result.candidates
        findings = result.findings
        n_candidates += len(candidates)
        n_base += len(candidates)
        n_pipe += len(findings)

        base_secret += match_predictions(candidates, doc.annotations)
        base_benign += _benign_class_counts(candidates, doc.annotations)
        pipe_secret += match_predictions(findings, doc.annotations)
        pipe_benign += _benign_class_counts(findings, doc.annotations)

        candidate_spans = {(c.start, c.end) for c in candidates}
        for ann in doc.annotations:
            if ann.label == Label.SECRET.value and (ann.start, ann.end) not in candidate_spans:
                warnings.append(
                    f"document {doc.id}: Secret annotation [{ann.start}, {ann.end}) "
                    "matched by no catalog rule"
                )

    return EvalReport(
        regex_only=_score(base_secret, base_benign, n_base),
        pipeline=_score(pipe_secret, pipe_benign, n_pipe),
        documents=len(corpus.documents),
        candidates=n_candidates,
        warnings=tuple(warnings),
    )


# --- corpus file format -----------------------------------------------------------


def load_corpus(source: str | Path) -> LabeledCorpus:
    """Corpus JSON: {"documents": [{"id", "text", "annotations": [{"start","end","label"}]}]}."""
    text = source.read_text(encoding="utf-8") if isinstance(source, Path) else source
    doc = json.loads(text)
    documents = []
    for i, entry in enumerate(doc["documents"]):
        annotations = tuple(
            Annotation(start=a["start"], end=a["end"], label=a["label"])
            for a in entry.get("annotations", [])
        )
        doc_bytes = len(entry["text"].encode("utf-8"))
        for a in annotations:
            if a.end > doc_bytes:
                raise ValueError(f"documents[{i}]: annotation end {a.end} past document end {doc_bytes}")
        documents.append(
            LabeledDocument(id=entry.get("id", f"doc-{i:04d}"), text=entry["text"], annotations=annotations)
        )
    return LabeledCorpus(documents=tuple(documents))


def dump_corpus(corpus: LabeledCorpus) -> str:
    return json.dumps(
        {
            "documents": [
                {
                    "id": d.id,
                    "text": d.text,
                    "annotations": [asdict(a) for a in d.annotations],
                }
                for d in corpus.documents
            ]
        },
        ensure_ascii=False,
        indent=1,
    )


# --- latency ----------------------------------------------------------------------


@dataclass(frozen=True)
class LatencySample:
    extraction_ms: float
    classification_ms: float
    total_ms: float


@dataclass(frozen=True)
class LatencyReport:
    samples: tuple[LatencySample, ...]
    mean_ms: float
    p50_ms: float
    p95_ms: float
    mean_extraction_ms: float = 0.0
    mean_classification_ms: float = 0.0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["samples"] = len(self.samples)
        return d


def nearest_rank(sorted_values: Sequence[float], quantile: float) -> float:
    """Nearest-rank order statistic; exact function of the samples."""
    if not sorted_values:
        raise ValueError("no samples")
    rank = min(len(sorted_values), max(1, math.ceil(quantile * len(sorted_values))))
    return sorted_values[rank - 1]


def measure_latency(
    documents: Sequence[str],
    endpoint: str,
    repetitions: int = 1,
    *,
    client: httpx.Client | None = None,
) -> LatencyReport:
    """One /analyze round trip per (document, repetition), issued sequentially.

    total_ms is client-measured wall time; stage timings come from the server's
    response. Requests are sequential to avoid self-induced queueing noise.
    """
    owned = client is None
    http = client or httpx.Client(timeout=30.0)
    samples: list[LatencySample] = []
    try:
        for _ in range(repetitions):
            for document in documents:
                t0 = time.perf_counter()
                response = http.post(f"{endpoint.rstrip('/')}/analyze", json={"document": document})
                wall_ms = (time.perf_counter() - t0) * 1000.0
                response.raise_for_status()
                timing = response.json()["timing"]
                samples.append(
                    LatencySample(
                        extraction_ms=timing["extraction_ms"],
                        classification_ms=timing["classification_ms"],
                        total_ms=wall_ms,
                    )
                )
    finally:
        if owned:
            http.close()

    totals = sorted(s.total_ms for s in samples)
    return LatencyReport(
        samples=tuple(samples),
        mean_ms=statistics.fmean(totals),
        p50_ms=nearest_rank(totals, 0.50),
        p95_ms=nearest_rank(totals, 0.95),
        mean_extraction_ms=statistics.fmean(s.extraction_ms for s in samples),
        mean_classification_ms=statistics.fmean(s.classification_ms for s in samples),
    )
