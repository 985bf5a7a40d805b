"""Rule catalog: data-driven secret-format rules, validated and compiled for scanning.

A catalog is a YAML document of rule records (see docs/catalog-format.md).
Rules are plain data so the shipped seed catalog can be swapped out without
touching code. Matching semantics are fixed here: each rule contributes its
leftmost non-overlapping matches independently, and overlaps *across* rules
are preserved.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterator

import yaml

try:  # Python 3.11+ moved the sre internals
    from re import _parser as sre_parse  # type: ignore[attr-defined]
except ImportError:  # pragma: no cover - 3.10 fallback
    import sre_parse  # type: ignore[no-redef]

DEFAULT_CATALOG_RESOURCE = "rules.yml"

VALID_CATEGORIES = (
    "cloud-key",
    "vcs-token",
    "chat-token",
    "private-key",
    "generic-assignment",
    "other",
)


class CatalogError(ValueError):
    """Malformed catalog document, duplicate id, or invalid pattern."""

    def __init__(self, message: str, *, rule_id: str | None = None, location: str | None = None):
        detail = message
        if rule_id is not None:
            detail = f"rule {rule_id!r}: {detail}"
        if location is not None:
            detail = f"{detail} (at {location})"
        super().__init__(detail)
        self.rule_id = rule_id
        self.location = location


@dataclass(frozen=True)
class RuleRecord:
    """One secret-format detection rule."""

    id: str
    name: str
    pattern: str
    category: str
    enabled: bool = True

    def __post_init__(self) -> None:
        if self.category not in VALID_CATEGORIES:
            raise CatalogError(
                f"unknown category {self.category!r} (expected one of {', '.join(VALID_CATEGORIES)})",
                rule_id=self.id,
            )


@dataclass(frozen=True)
class ValidationDefect:
    kind: str  # non-compiling | dialect | empty-match | empty-language
    message: str


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    defects: tuple[ValidationDefect, ...] = ()


@dataclass(frozen=True)
class RuleCatalog:
    """Ordered rule list plus a content hash that changes iff any rule text changes."""

    rules: tuple[RuleRecord, ...]
    version: str = field(default="")

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for rule in self.rules:
            if rule.id in seen:
                raise CatalogError("duplicate id", rule_id=rule.id)
            seen.add(rule.id)
        if not self.version:
            object.__setattr__(self, "version", catalog_version(self.rules))

    def enabled_rules(self) -> tuple[RuleRecord, ...]:
        return tuple(r for r in self.rules if r.enabled)

    def __len__(self) -> int:
        return len(self.rules)


@dataclass(frozen=True)
class RuleMatch:
    """A single raw match: rule id plus character span into the scanned text."""

    rule_id: str
    start: int  # character offsets; byte spans are attached by the scan engine
    end: int
    text: str


def _canonical_payload(rules: tuple[RuleRecord, ...] | list[RuleRecord]) -> str:
    records = [
        {
            "id": r.id,
            "name": r.name,
            "pattern": r.pattern,
            "category": r.category,
            "enabled": r.enabled,
        }
        for r in rules
    ]
    return json.dumps(records, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def catalog_version(rules: tuple[RuleRecord, ...] | list[RuleRecord]) -> str:
    """Deterministic content hash over the canonical serialization of the rules."""
    return hashlib.sha256(_canonical_payload(rules).encode("utf-8")).hexdigest()


# --- dialect and language checks -------------------------------------------------


def _walk_subpattern(parsed) -> Iterator[tuple]:
    for op, av in parsed:
        yield op, av
        opname = str(op)
        if opname == "SUBPATTERN":
            yield from _walk_subpattern(av[-1])
        elif opname in ("MAX_REPEAT", "MIN_REPEAT", "POSSESSIVE_REPEAT"):
            yield from _walk_subpattern(av[2])
        elif opname == "BRANCH":
            for branch in av[1]:
                yield from _walk_subpattern(branch)
        elif opname in ("ASSERT", "ASSERT_NOT"):
            yield from _walk_subpattern(av[1])
        elif opname == "ATOMIC_GROUP":
            yield from _walk_subpattern(av)


def _dialect_defects(parsed) -> list[ValidationDefect]:
    defects = []
    for op, av in _walk_subpattern(parsed):
        opname = str(op)
        if opname in ("GROUPREF", "GROUPREF_EXISTS"):
            defects.append(ValidationDefect("dialect", "backreferences are outside the catalog dialect"))
        elif opname in ("ASSERT", "ASSERT_NOT") and av[0] < 0:
            defects.append(ValidationDefect("dialect", "lookbehind is outside the catalog dialect"))
    return defects


def _char_in_set_item(ch: str, op, av) -> bool:
    opname = str(op)
    if opname == "LITERAL":
        return ord(ch) == av
    if opname == "RANGE":
        return av[0] <= ord(ch) <= av[1]
    if opname == "CATEGORY":
        cat = str(av)
        if cat == "CATEGORY_DIGIT":
            return ch.isdigit()
        if cat == "CATEGORY_NOT_DIGIT":
            return not ch.isdigit()
        if cat == "CATEGORY_SPACE":
            return ch.isspace()
        if cat == "CATEGORY_NOT_SPACE":
            return not ch.isspace()
        if cat == "CATEGORY_WORD":
            return ch.isalnum() or ch == "_"
        if cat == "CATEGORY_NOT_WORD":
            return not (ch.isalnum() or ch == "_")
    return False


def _witness_from_set(items) -> str | None:
    """Pick one character accepted by an IN set, or None when the set is empty."""
    negated = bool(items) and str(items[0][0]) == "NEGATE"
    body = items[1:] if negated else items
    if negated:
        for probe in ("q", "7", " ", "-", "Z", ".", "é", "\n"):
            if not any(_char_in_set_item(probe, op, av) for op, av in body):
                return probe
        return None
    for op, av in body:
        opname = str(op)
        if opname == "LITERAL":
            return chr(av)
        if opname == "RANGE":
            return chr(av[0])
        if opname == "CATEGORY":
            cat = str(av)
            if cat == "CATEGORY_DIGIT":
                return "7"
            if cat == "CATEGORY_SPACE":
                return " "
            if cat in ("CATEGORY_NOT_DIGIT", "CATEGORY_NOT_SPACE", "CATEGORY_WORD"):
                return "q"
            if cat == "CATEGORY_NOT_WORD":
                return "-"
    return None


def _generate_witness(parsed) -> str | None:
    """Build one string in the pattern's language, ignoring zero-width assertions.

    Returns None when some required position admits no character (empty language,
    e.g. an impossible character class).
    """
    out: list[str] = []
    for op, av in parsed:
        opname = str(op)
        if opname == "LITERAL":
            out.append(chr(av))
        elif opname == "NOT_LITERAL":
            out.append("q" if chr(av) != "q" else "z")
        elif opname == "ANY":
            out.append("q")
        elif opname == "IN":
            ch = _witness_from_set(av)
            if ch is None:
                return None
            out.append(ch)
        elif opname in ("MAX_REPEAT", "MIN_REPEAT", "POSSESSIVE_REPEAT"):
            lo, _hi, item = av
            if lo:
                inner = _generate_witness(item)
                if inner is None:
                    return None
                out.append(inner * lo)
        elif opname == "SUBPATTERN":
            inner = _generate_witness(av[-1])
            if inner is None:
                return None
            out.append(inner)
        elif opname == "ATOMIC_GROUP":
            inner = _generate_witness(av)
            if inner is None:
                return None
            out.append(inner)
        elif opname == "BRANCH":
            for branch in av[1]:
                inner = _generate_witness(branch)
                if inner is not None:
                    out.append(inner)
                    break
            else:
                return None
        elif opname in ("AT", "ASSERT", "ASSERT_NOT"):
            continue  # zero-width; verified afterwards via search
    return "".join(out)


def validate_rule(rule: RuleRecord) -> ValidationResult:
    """Check one rule: compiles, stays in the dialect, non-empty language, no zero-width match.

    Defects are data, not exceptions — callers decide whether to fail.
    """
    try:
        compiled = re.compile(rule.pattern)
    except re.error as exc:
        return ValidationResult(False, (ValidationDefect("non-compiling", str(exc)),))

    defects: list[ValidationDefect] = []
    parsed = sre_parse.parse(rule.pattern)
    defects.extend(_dialect_defects(parsed))

    if compiled.search("") is not None:
        defects.append(ValidationDefect("empty-match", "pattern matches the empty string"))
    else:
        witness = _generate_witness(parsed)
        if witness is None or compiled.search(witness) is None:
            defects.append(
                ValidationDefect(
                    "empty-language",
                    "no matching string could be constructed for this pattern",
                )
            )

    if defects:
        return ValidationResult(False, tuple(defects))
    return ValidationResult(True)


# --- loading / serialization ------------------------------------------------------


def _parse_record(entry: object, index: int) -> RuleRecord:
    location = f"rules[{index}]"
    if not isinstance(entry, dict):
        raise CatalogError("rule entry must be a mapping", location=location)
    missing = [k for k in ("id", "name", "pattern", "category") if k not in entry]
    if missing:
        raise CatalogError(f"missing keys: {', '.join(missing)}", location=location)
    unknown = set(entry) - {"id", "name", "pattern", "category", "enabled"}
    if unknown:
        raise CatalogError(f"unknown keys: {', '.join(sorted(unknown))}", location=location)
    rule_id = entry["id"]
    if not isinstance(rule_id, str) or not rule_id:
        raise CatalogError("id must be a non-empty string", location=location)
    for key in ("name", "pattern"):
        if not isinstance(entry[key], str):
            raise CatalogError(f"{key} must be a string", rule_id=rule_id, location=location)
    enabled = entry.get("enabled", True)
    if not isinstance(enabled, bool):
        raise CatalogError("enabled must be a boolean", rule_id=rule_id, location=location)
    try:
        return RuleRecord(
            id=rule_id,
            name=entry["name"],
            pattern=entry["pattern"],
            category=entry["category"],
            enabled=enabled,
        )
    except CatalogError as exc:
        raise CatalogError(str(exc), location=location) from None


def load_catalog(source: str | Path) -> RuleCatalog:
    """Parse and validate a catalog document.

    `source` is YAML text, or a path to a YAML file. Raises CatalogError naming
    the rule id and entry location for any parse failure, duplicate id, or
    invalid pattern.
    """
    if isinstance(source, Path):
        text = source.read_text(encoding="utf-8")
    else:
        text = source
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise CatalogError(f"malformed catalog document: {exc}") from exc

    if doc is None:
        doc = {"rules": []}
    if not isinstance(doc, dict) or "rules" not in doc:
        raise CatalogError("catalog document must be a mapping with a 'rules' key")
    entries = doc["rules"]
    if entries is None:
        entries = []
    if not isinstance(entries, list):
        raise CatalogError("'rules' must be a sequence")

    rules: list[RuleRecord] = []
    seen: set[str] = set()
    for index, entry in enumerate(entries):
        record = _parse_record(entry, index)
        if record.id in seen:
            raise CatalogError("duplicate id", rule_id=record.id, location=f"rules[{index}]")
        seen.add(record.id)
        result = validate_rule(record)
        if not result.ok:
            reasons = "; ".join(f"{d.kind}: {d.message}" for d in result.defects)
            raise CatalogError(f"invalid pattern: {reasons}", rule_id=record.id, location=f"rules[{index}]")
        rules.append(record)

    return RuleCatalog(rules=tuple(rules))


def load_default_catalog() -> RuleCatalog:
    """Load the seed catalog shipped with the package."""
    text = resources.files("leakwarden.data").joinpath(DEFAULT_CATALOG_RESOURCE).read_text("utf-8")
    return RuleCatalog(rules=load_catalog(text).rules)


def serialize_catalog(catalog: RuleCatalog) -> str:
    """Canonical YAML form; load_catalog(serialize_catalog(c)) reproduces c."""
    entries = [
        {
            "id": r.id,
            "name": r.name,
            "pattern": r.pattern,
            "category": r.category,
            "enabled": r.enabled,
        }
        for r in catalog.rules
    ]
    return yaml.safe_dump({"rules": entries}, sort_keys=False, allow_unicode=True, width=1000)


# --- compilation ------------------------------------------------------------------


class CompiledMatcher:
    """Immutable multi-pattern matcher over the enabled rules of a catalog.

    Match set over any text equals the union, across enabled rules, of each
    rule's leftmost non-overlapping matches. Safe to share between threads.
    """

    def __init__(self, rules: tuple[tuple[str, re.Pattern[str]], ...], catalog_version: str):
        self._rules = rules
        self.catalog_version = catalog_version

    @property
    def rule_ids(self) -> tuple[str, ...]:
        return tuple(rule_id for rule_id, _ in self._rules)

    def finditer(self, text: str) -> Iterator[RuleMatch]:
        for rule_id, pattern in self._rules:
            for m in pattern.finditer(text):
                if m.start() == m.end():
                    continue  # zero-width matches are rejected at validation; belt and braces
                yield RuleMatch(rule_id=rule_id, start=m.start(), end=m.end(), text=m.group(0))

    def matches(self, text: str) -> list[RuleMatch]:
        """All matches ordered by (start, rule_id)."""
        return sorted(self.finditer(text), key=lambda m: (m.start, m.rule_id))


def compile_catalog(catalog: RuleCatalog) -> CompiledMatcher:
    """Compile the enabled rules; validation defects propagate as CatalogError."""
    compiled: list[tuple[str, re.Pattern[str]]] = []
    for rule in catalog.enabled_rules():
        result = validate_rule(rule)
        if not result.ok:
            reasons = "; ".join(f"{d.kind}: {d.message}" for d in result.defects)
            raise CatalogError(f"invalid pattern: {reasons}", rule_id=rule.id)
        compiled.append((rule.id, re.compile(rule.pattern)))
    return CompiledMatcher(tuple(compiled), catalog.version)
