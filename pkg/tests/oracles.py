"""Independent reference implementations used as test oracles.

Deliberately different machinery from the production code: per-rule manual
search loops instead of the compiled multi-pattern matcher, naive prefix
encoding instead of offset tables, and a list-based LRU model instead of an
ordered dict. Keep it that way — these exist to disagree when the production
side is wrong.
"""

from __future__ import annotations

import re
from collections import Counter

from leakwarden.catalog import RuleCatalog


def byte_offset(document: str, char_index: int) -> int:
    return len(document[:char_index].encode("utf-8"))


def brute_force_matches(document: str, catalog: RuleCatalog) -> list[tuple[str, int, int]]:
    """Leftmost non-overlapping matches per enabled rule, as (rule_id, byte span)."""
    out: list[tuple[str, int, int]] = []
    for rule in catalog.rules:
        if not rule.enabled:
            continue
        compiled = re.compile(rule.pattern)
        pos = 0
        while pos <= len(document):
            m = compiled.search(document, pos)
            if m is None:
                break
            if m.end() > m.start():
                out.append((rule.id, byte_offset(document, m.start()), byte_offset(document, m.end())))
                pos = m.end()
            else:
                pos += 1
    return sorted(out, key=lambda t: (t[1], t[0], t[2]))


def match_multiset(items) -> Counter:
    return Counter(items)


class ReferenceLru:
    """Brute-force LRU model: a plain list ordered oldest-access-first."""

    def __init__(self, capacity: int):
        self.capacity = capacity
        self.items: list[tuple[object, object]] = []

    def get(self, key):
        for i, (k, v) in enumerate(self.items):
            if k == key:
                self.items.pop(i)
                self.items.append((k, v))
                return v
        return None

    def put(self, key, value) -> None:
        if self.capacity == 0:
            return
        for i, (k, _) in enumerate(self.items):
            if k == key:
                self.items.pop(i)
                break
        self.items.append((key, value))
        if len(self.items) > self.capacity:
            self.items.pop(0)

    def keys(self) -> list:
        return [k for k, _ in self.items]
