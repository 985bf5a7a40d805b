"""leakwarden: real-time secret-leak prevention for issue text.

Rule-driven candidate extraction, contextual false-positive filtering, an LRU
result cache, a loopback HTTP analysis service, and an evaluation harness.
"""

from .cache import CacheKey, CacheStats, LruCache
from .catalog import (
    CatalogError,
    CompiledMatcher,
    RuleCatalog,
    RuleRecord,
    compile_catalog,
    load_catalog,
    load_default_catalog,
    serialize_catalog,
    validate_rule,
)
from .classify import (
    Classification,
    ClassifierSpec,
    ClassifierUnavailableError,
    Finding,
    Label,
    classify,
    filter_findings,
    heuristic_score,
    mask_secret,
    remote_classify,
)
from .evaluation import (
    Annotation,
    ConfusionCounts,
    EvalReport,
    LabeledCorpus,
    LabeledDocument,
    Metrics,
    evaluate_pipeline,
    load_corpus,
    macro_average,
    match_predictions,
    measure_latency,
    precision_recall_f1,
)
from .pipeline import AnalysisResult, DocumentAnalyzer
from .scanner import (
    Candidate,
    ContextWindow,
    DocumentTooLargeError,
    SpanError,
    dedupe_candidates,
    extract_candidates,
    extract_context,
)
from .service import ServiceConfig, create_app

__version__ = "0.1.0"

__all__ = [
    "AnalysisResult",
    "Annotation",
    "CacheKey",
    "CacheStats",
    "Candidate",
    "CatalogError",
    "Classification",
    "ClassifierSpec",
    "ClassifierUnavailableError",
    "CompiledMatcher",
    "ConfusionCounts",
    "ContextWindow",
    "DocumentAnalyzer",
    "DocumentTooLargeError",
    "EvalReport",
    "Finding",
    "Label",
    "LabeledCorpus",
    "LabeledDocument",
    "LruCache",
    "Metrics",
    "RuleCatalog",
    "RuleRecord",
    "ServiceConfig",
    "SpanError",
    "classify",
    "compile_catalog",
    "create_app",
    "dedupe_candidates",
    "evaluate_pipeline",
    "extract_candidates",
    "extract_context",
    "filter_findings",
    "heuristic_score",
    "load_catalog",
    "load_corpus",
    "load_default_catalog",
    "macro_average",
    "mask_secret",
    "match_predictions",
    "measure_latency",
    "precision_recall_f1",
    "remote_classify",
    "serialize_catalog",
    "validate_rule",
]
