"""Scan engine: applies a compiled catalog to a document and attaches context.

Spans are byte offsets into the UTF-8 encoding of the document so that clients
can highlight exactly what matched; context windows are counted in Unicode
code points because they feed the classifier. docs/protocol.md documents both
conventions.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass

from .catalog import CompiledMatcher

MAX_DOCUMENT_BYTES = 1 << 20  # 1 MiB default cap; configurable per call
CONTEXT_BUDGET = 200  # total characters across both sides of a candidate
_NOMINAL_SIDE = CONTEXT_BUDGET // 2


class DocumentTooLargeError(ValueError):
    def __init__(self, size: int, limit: int):
        super().__init__(f"document is {size} bytes; limit is {limit}")
        self.size = size
        self.limit = limit


class SpanError(ValueError):
    """Span does not address a valid byte range of the document."""


@dataclass(frozen=True)
class ContextWindow:
    """Document text adjacent to a candidate, excluding the candidate itself.

    len(before) + len(after) never exceeds CONTEXT_BUDGET; when one side of the
    document is short, the unused budget moves to the other side.
    """

    before: str
    after: str
    budget: int = CONTEXT_BUDGET


@dataclass(frozen=True)
class Candidate:
    """A catalog match: exact byte span, matched text, rule id, and context."""

    text: str
    start: int  # byte offset, half-open [start, end)
    end: int
    rule_id: str
    context: ContextWindow


class _OffsetMap:
    """Bidirectional character/byte offset conversion for one document."""

    def __init__(self, document: str):
        offsets = [0] * (len(document) + 1)
        pos = 0
        for i, ch in enumerate(document):
            offsets[i] = pos
            pos += len(ch.encode("utf-8"))
        offsets[len(document)] = pos
        self._char_to_byte = offsets
        self.total_bytes = pos

    def to_byte(self, char_index: int) -> int:
        return self._char_to_byte[char_index]

    def to_char(self, byte_offset: int) -> int:
        idx = bisect_left(self._char_to_byte, byte_offset)
        if idx == len(self._char_to_byte) or self._char_to_byte[idx] != byte_offset:
            raise SpanError(f"byte offset {byte_offset} is not on a character boundary")
        return idx


def _window_sides(avail_before: int, avail_after: int) -> tuple[int, int]:
    before = min(avail_before, _NOMINAL_SIDE)
    after = min(avail_after, _NOMINAL_SIDE)
    spare = CONTEXT_BUDGET - before - after
    grow_after = min(avail_after - after, spare)
    after += grow_after
    spare -= grow_after
    before += min(avail_before - before, spare)
    return before, after


def extract_context(document: str, span: tuple[int, int]) -> ContextWindow:
    """Context window for a byte span: nominal 100 chars per side, boundary budget
    redistributed, candidate text excluded."""
    offsets = _OffsetMap(document)
    return _context_for(document, offsets, span[0], span[1])


def _context_for(document: str, offsets: _OffsetMap, start: int, end: int) -> ContextWindow:
    if not (0 <= start < end <= offsets.total_bytes):
        raise SpanError(f"span [{start}, {end}) invalid for a {offsets.total_bytes}-byte document")
    char_start = offsets.to_char(start)
    char_end = offsets.to_char(end)
    n_before, n_after = _window_sides(char_start, len(document) - char_end)
    return ContextWindow(
        before=document[char_start - n_before : char_start],
        after=document[char_end : char_end + n_after],
    )


def extract_candidates(
    document: str,
    matcher: CompiledMatcher,
    *,
    max_bytes: int = MAX_DOCUMENT_BYTES,
) -> list[Candidate]:
    """All catalog matches over the document, with context, ordered by (start, rule_id).

    Deterministic for a fixed (document, catalog version). Documents above
    `max_bytes` (UTF-8 size) raise DocumentTooLargeError.
    """
    offsets = _OffsetMap(document)
    if offsets.total_bytes > max_bytes:
        raise DocumentTooLargeError(offsets.total_bytes, max_bytes)

    candidates = []
    for m in matcher.finditer(document):
        start = offsets.to_byte(m.start)
        end = offsets.to_byte(m.end)
        candidates.append(
            Candidate(
                text=m.text,
                start=start,
                end=end,
                rule_id=m.rule_id,
                context=_context_for(document, offsets, start, end),
            )
        )
    candidates.sort(key=lambda c: (c.start, c.rule_id))
    return candidates


def dedupe_candidates(candidates: list[Candidate]) -> list[Candidate]:
    """Drop exact (span, rule_id) duplicates, keeping first occurrence and order.

    Same span under different rules is not a duplicate; cross-rule overlaps
    carry signal for classification.
    """
    seen: set[tuple[int, int, str]] = set()
    out = []
    for c in candidates:
        key = (c.start, c.end, c.rule_id)
        if key in seen:
            continue
        seen.add(key)
        out.append(c)
    return out
