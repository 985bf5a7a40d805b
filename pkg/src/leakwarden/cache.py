"""LRU memoization of classification results.

The cache is transparent: it may only change timing, never pipeline output.
Keys cover everything the classification depends on — candidate text, both
context sides, classifier identity, and threshold — so switching classifiers
or thresholds can never serve a stale label.
"""

from __future__ import annotations

import hashlib
import json
import threading
from collections import OrderedDict
from dataclasses import dataclass

from .classify import Classification
from .scanner import ContextWindow

DEFAULT_CAPACITY = 10_000


@dataclass(frozen=True)
class CacheKey:
    digest: str

    @classmethod
    def for_classification(
        cls,
        candidate_text: str,
        context: ContextWindow,
        classifier_id: str,
        threshold: float,
    ) -> "CacheKey":
        payload = json.dumps(
            [candidate_text, context.before, context.after, classifier_id, repr(threshold)],
            ensure_ascii=False,
        )
        return cls(digest=hashlib.sha256(payload.encode("utf-8")).hexdigest())


@dataclass(frozen=True)
class CacheStats:
    hits: int
    misses: int
    evictions: int
    size: int
    capacity: int


class LruCache:
    """Fixed-capacity map with least-recently-used eviction.

    Thread-safe: a single lock serializes get/put so the LRU order and the
    stats counters stay consistent under concurrent request handlers.
    Capacity 0 degenerates to a no-op cache (every get misses).
    """

    def __init__(self, capacity: int = DEFAULT_CAPACITY):
        if capacity < 0:
            raise ValueError("capacity must be >= 0")
        self._capacity = capacity
        self._entries: OrderedDict[CacheKey, Classification] = OrderedDict()
        self._lock = threading.Lock()
        self._hits = 0
        self._misses = 0
        self._evictions = 0

    def get(self, key: CacheKey) -> Classification | None:
        with self._lock:
            value = self._entries.get(key)
            if value is None:
                self._misses += 1
                return None
            self._entries.move_to_end(key)
            self._hits += 1
            return value

    def put(self, key: CacheKey, value: Classification) -> None:
        if self._capacity == 0:
            return
        with self._lock:
            if key in self._entries:
                self._entries[key] = value
                self._entries.move_to_end(key)
                return
            self._entries[key] = value
            if len(self._entries) > self._capacity:
                self._entries.popitem(last=False)
                self._evictions += 1

    def __contains__(self, key: CacheKey) -> bool:
        with self._lock:
            return key in self._entries

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)

    def stats(self) -> CacheStats:
        with self._lock:
            return CacheStats(
                hits=self._hits,
                misses=self._misses,
                evictions=self._evictions,
                size=len(self._entries),
                capacity=self._capacity,
            )
