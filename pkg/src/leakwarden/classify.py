"""Binary Secret / Non-sensitive classification of scan candidates.

Two interchangeable classifiers sit behind one batch interface:

* HeuristicClassifier — a deterministic, documented scoring function used as
  the reference implementation and for offline evaluation.
* RemoteClassifier — transport to an externally hosted model server speaking
  the wire contract in docs/protocol.md (request: array of {candidate,
  context_before, context_after}; response: array of {confidence}).

The heuristic score is a clamped weighted sum of five features (weights below,
also documented in docs/heuristic-classifier.md):

  (a) normalized Shannon entropy of the candidate's characters,
  (b) a candidate length band,
  (c) placeholder lexicon hits inside the candidate (strong negative),
  (d) masking characters such as '*' and '…' (negative),
  (e) context lexicon hits — documentation-flavoured terms push down,
      incident-flavoured terms push up.
"""

from __future__ import annotations

import math
import re
import threading
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Protocol, Sequence

import httpx

from .scanner import Candidate, ContextWindow

HEURISTIC_CLASSIFIER_ID = "heuristic-v1"
DEFAULT_THRESHOLD = 0.5
DEFAULT_REMOTE_TIMEOUT_S = 2.0
DEFAULT_REMOTE_CONCURRENCY = 4

UNVERIFIED_LABEL = "Unverified"  # wire-level label for degraded mode; not a Classification


class Label(str, Enum):
    SECRET = "Secret"
    NON_SENSITIVE = "NonSensitive"


@dataclass(frozen=True)
class Classification:
    """Label with confidence; label is Secret exactly when confidence >= threshold."""

    label: Label
    confidence: float
    classifier_id: str
    threshold_used: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence {self.confidence} outside [0, 1]")
        expected = Label.SECRET if self.confidence >= self.threshold_used else Label.NON_SENSITIVE
        if self.label is not expected:
            raise ValueError(
                f"label {self.label.value} inconsistent with confidence "
                f"{self.confidence} at threshold {self.threshold_used}"
            )


@dataclass(frozen=True)
class Finding:
    """A candidate confirmed as Secret. Only these reach the client."""

    candidate: Candidate
    classification: Classification

    def __post_init__(self) -> None:
        if self.classification.label is not Label.SECRET:
            raise ValueError("findings must carry a Secret classification")


@dataclass(frozen=True)
class ClassifierSpec:
    kind: str  # "heuristic" | "remote"
    endpoint: str | None = None
    threshold: float = DEFAULT_THRESHOLD
    timeout_s: float = DEFAULT_REMOTE_TIMEOUT_S
    max_concurrency: int = DEFAULT_REMOTE_CONCURRENCY

    def __post_init__(self) -> None:
        if self.kind not in ("heuristic", "remote"):
            raise ValueError(f"unknown classifier kind {self.kind!r}")
        if self.kind == "remote" and not self.endpoint:
            raise ValueError("remote classifier requires an endpoint")
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError("threshold must be in [0, 1]")


class ClassifierUnavailableError(RuntimeError):
    """Remote classifier could not produce a result; `failure` says why."""

    def __init__(self, failure: str, message: str):
        super().__init__(f"classifier unavailable ({failure}): {message}")
        self.failure = failure  # "timeout" | "connection" | "protocol"


class Classifier(Protocol):
    classifier_id: str

    def score_batch(self, items: Sequence[tuple[str, ContextWindow]]) -> list[float]: ...


# --- heuristic scoring ------------------------------------------------------------

# Weight vector. Frozen: regression fixtures and the desk-corpus bounds are
# derived from these exact values.
BASE_SCORE = 0.10
W_ENTROPY = 0.50
W_LENGTH = 0.20
W_PLACEHOLDER = -0.60
W_MASKING = -0.50
W_BENIGN_CONTEXT = -0.25  # per distinct term, capped at MAX_CONTEXT_HITS
W_LEAK_CONTEXT = 0.15  # per distinct term, capped at MAX_CONTEXT_HITS
MAX_CONTEXT_HITS = 2

# Bits/char ceiling for the entropy feature: the entropy of a random
# lowercase-letter string. Hex digests land visibly below it; real mixed-case
# keys saturate it.
ENTROPY_NORMALIZER = 4.7

# Substrings (lowercased comparison) that mark a candidate as placeholder-like.
PLACEHOLDER_TERMS = (
    "example",
    "your",
    "dummy",
    "sample",
    "placeholder",
    "redacted",
    "xxx",
    "<",
    ">",
    "{",
    "}",
    "1234567890",
    "0123456789",
    "abcdefgh",
    "deadbeef",
    "changeme",
    "change-me",
    "change_me",
    "insert",
    "replace",
    "fixme",
    "todo",
    "test",
    "fake",
    "foobar",
    "my-",
    "my_",
    "-here",
    "_here",
)

# Characters used to blot out or truncate a value.
MASKING_CHARS = frozenset("*…•●█■")

# Context vocabulary, matched on word boundaries (so "commit" does not fire
# inside "committed", nor "prod" inside "reproduce"). Documentation/reference
# flavour lowers the score; the hash/digest terms let checksum-adjacent
# candidates (git SHAs, image digests) be recognized as benign from their
# surroundings.
BENIGN_CONTEXT_TERMS = (
    "example",
    "examples",
    "e.g.",
    "for instance",
    "sample",
    "placeholder",
    "replace",
    "your own",
    "docs",
    "documentation",
    "readme",
    "tutorial",
    "template",
    "snippet",
    "dummy",
    "fake",
    "mock",
    "sha256",
    "sha-256",
    "sha1",
    "sha-1",
    "md5",
    "checksum",
    "digest",
    "hash",
    "hashes",
    "commit",
    "fingerprint",
)

LEAK_CONTEXT_TERMS = (
    "prod",
    "production",
    "leak",
    "leaked",
    "oops",
    "accidentally",
    "accidental",
    "exposed",
    "pushed",
    "real",
    "live key",
    "revoke",
    "rotate",
    "compromised",
    "incident",
    "urgent",
    "breach",
)


def _term_pattern(term: str) -> "re.Pattern[str]":
    if re.fullmatch(r"[a-z0-9 ]+", term):
        return re.compile(r"\b" + re.escape(term) + r"\b")
    return re.compile(re.escape(term))  # punctuated terms ("e.g.") match as substrings


_BENIGN_PATTERNS = tuple(_term_pattern(t) for t in BENIGN_CONTEXT_TERMS)
_LEAK_PATTERNS = tuple(_term_pattern(t) for t in LEAK_CONTEXT_TERMS)


def shannon_entropy(text: str) -> float:
    """Character-level Shannon entropy in bits per character."""
    if not text:
        return 0.0
    length = len(text)
    entropy = 0.0
    for count in Counter(text).values():
        p = count / length
        entropy -= p * math.log2(p)
    return entropy


def _length_band(n: int) -> float:
    if n < 8:
        return 0.0
    if n < 12:
        return 0.4
    if n < 16:
        return 0.7
    if n <= 64:
        return 1.0
    if n <= 128:
        return 0.8
    return 0.5


def _looks_masked(text: str) -> bool:
    if "…" in text:
        return True
    masked = sum(1 for ch in text if ch in MASKING_CHARS)
    return masked >= 3 or (len(text) > 0 and masked / len(text) >= 0.25)


def _context_hits(context_text: str, patterns: Sequence["re.Pattern[str]"]) -> int:
    hits = sum(1 for pattern in patterns if pattern.search(context_text))
    return min(hits, MAX_CONTEXT_HITS)


def heuristic_score(candidate_text: str, context: ContextWindow) -> float:
    """Score in [0, 1]; >= threshold means Secret. Pure function of its inputs."""
    lowered = candidate_text.lower()
    context_text = f"{context.before} {context.after}".lower()

    score = BASE_SCORE
    score += W_ENTROPY * min(1.0, shannon_entropy(candidate_text) / ENTROPY_NORMALIZER)
    score += W_LENGTH * _length_band(len(candidate_text))
    if any(term in lowered for term in PLACEHOLDER_TERMS):
        score += W_PLACEHOLDER
    if _looks_masked(candidate_text):
        score += W_MASKING
    score += W_BENIGN_CONTEXT * _context_hits(context_text, _BENIGN_PATTERNS)
    score += W_LEAK_CONTEXT * _context_hits(context_text, _LEAK_PATTERNS)
    return min(1.0, max(0.0, score))


class HeuristicClassifier:
    """Reference classifier: stateless, deterministic, safe for concurrent use."""

    classifier_id = HEURISTIC_CLASSIFIER_ID

    def score_batch(self, items: Sequence[tuple[str, ContextWindow]]) -> list[float]:
        return [heuristic_score(text, context) for text, context in items]


class RemoteClassifier:
    """HTTP adapter for an externally hosted model server.

    One POST per batch; a semaphore caps concurrent in-flight requests so a
    local model server is not overloaded by parallel analyses.
    """

    def __init__(self, endpoint: str, timeout_s: float = DEFAULT_REMOTE_TIMEOUT_S,
                 max_concurrency: int = DEFAULT_REMOTE_CONCURRENCY):
        self.classifier_id = f"remote:{endpoint}"
        self._endpoint = endpoint
        self._timeout_s = timeout_s
        self._semaphore = threading.Semaphore(max_concurrency)

    def score_batch(self, items: Sequence[tuple[str, ContextWindow]]) -> list[float]:
        if not items:
            return []
        payload = [
            {"candidate": text, "context_before": ctx.before, "context_after": ctx.after}
            for text, ctx in items
        ]
        with self._semaphore:
            try:
                response = httpx.post(self._endpoint, json=payload, timeout=self._timeout_s)
            except httpx.TimeoutException as exc:
                raise ClassifierUnavailableError("timeout", str(exc)) from exc
            except httpx.TransportError as exc:
                raise ClassifierUnavailableError("connection", str(exc)) from exc
        if response.status_code != 200:
            raise ClassifierUnavailableError("protocol", f"HTTP {response.status_code}")
        try:
            body = response.json()
            confidences = [float(item["confidence"]) for item in body]
        except (ValueError, TypeError, KeyError) as exc:
            raise ClassifierUnavailableError("protocol", f"malformed response: {exc}") from exc
        if len(confidences) != len(items):
            raise ClassifierUnavailableError(
                "protocol", f"expected {len(items)} confidences, got {len(confidences)}"
            )
        return confidences


def build_classifier(spec: ClassifierSpec) -> Classifier:
    if spec.kind == "remote":
        assert spec.endpoint is not None
        return RemoteClassifier(spec.endpoint, spec.timeout_s, spec.max_concurrency)
    return HeuristicClassifier()


def to_classification(confidence: float, classifier_id: str, threshold: float) -> Classification:
    confidence = min(1.0, max(0.0, confidence))
    label = Label.SECRET if confidence >= threshold else Label.NON_SENSITIVE
    return Classification(
        label=label,
        confidence=confidence,
        classifier_id=classifier_id,
        threshold_used=threshold,
    )


def classify(candidate: Candidate, spec: ClassifierSpec) -> Classification:
    """Classify one candidate per the spec'd classifier. Deterministic for fixed inputs."""
    classifier = build_classifier(spec)
    [confidence] = classifier.score_batch([(candidate.text, candidate.context)])
    return to_classification(confidence, classifier.classifier_id, spec.threshold)


def remote_classify(
    batch: Sequence[tuple[str, ContextWindow]], spec: ClassifierSpec
) -> list[Classification]:
    """Order-preserving batch classification via the remote adapter."""
    if spec.kind != "remote":
        raise ValueError("remote_classify requires a remote classifier spec")
    classifier = build_classifier(spec)
    confidences = classifier.score_batch(batch)
    return [to_classification(c, classifier.classifier_id, spec.threshold) for c in confidences]


def filter_findings(
    candidates: Sequence[Candidate], classifications: Sequence[Classification]
) -> list[Finding]:
    """Keep exactly the Secret-labeled candidates, in order."""
    if len(candidates) != len(classifications):
        raise ValueError(
            f"{len(candidates)} candidates but {len(classifications)} classifications"
        )
    return [
        Finding(candidate=cand, classification=cls)
        for cand, cls in zip(candidates, classifications)
        if cls.label is Label.SECRET
    ]


def mask_secret(text: str) -> str:
    """Redacted display form: at most first 4 and last 2 characters visible."""
    if len(text) < 8:
        return "*" * len(text)
    return text[:4] + "*" * (len(text) - 6) + text[-2:]
