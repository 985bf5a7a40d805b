from __future__ import annotations

import json
import logging
import threading
from pathlib import Path

import pytest
from fastapi.testclient import TestClient
from jsonschema import Draft202012Validator

from leakwarden.classify import ClassifierSpec
from leakwarden.pipeline import DocumentAnalyzer
from leakwarden.service import ServiceConfig, build_analyzer, create_app

from .conftest import SAMPLE_AKID

MIXED_DOC = f'here is the key {SAMPLE_AKID} but set api_key = "YOUR_API_KEY" first'

_SCHEMA = json.loads(
    (Path(__file__).resolve().parent.parent / "docs" / "analyze-schema.json").read_text()
)


def _response_validator() -> Draft202012Validator:
    return Draft202012Validator(
        {"$defs": _SCHEMA["$defs"], "$ref": "#/$defs/AnalyzeResponse"}
    )


@pytest.fixture()
def client(analyzer):
    app = create_app(ServiceConfig(), analyzer=analyzer)
    with TestClient(app) as test_client:
        yield test_client


class TestAnalyzeEndpoint:
    def test_empty_document(self, client):
        response = client.post("/analyze", json={"document": ""})
        assert response.status_code == 200
        body = response.json()
        assert body["findings"] == []
        assert body["timing"]["extraction_ms"] >= 0

    def test_real_token_flagged_placeholder_ignored(self, client):
        body = client.post("/analyze", json={"document": MIXED_DOC}).json()
        assert len(body["findings"]) == 1
        [finding] = body["findings"]
        assert finding["label"] == "Secret"
        assert finding["rule_id"] == "aws-access-key-id"
        raw = MIXED_DOC.encode("utf-8")
        assert raw[finding["span_start"] : finding["span_end"]].decode() == SAMPLE_AKID

    def test_full_secret_never_in_response(self, client):
        body = client.post("/analyze", json={"document": MIXED_DOC}).json()
        assert SAMPLE_AKID not in json.dumps(body)
        assert body["findings"][0]["masked_text"].startswith(SAMPLE_AKID[:4])

    def test_response_matches_schema(self, client):
        body = client.post("/analyze", json={"document": MIXED_DOC}).json()
        _response_validator().validate(body)

    def test_span_fidelity_with_multibyte_text(self, client):
        doc = f"💣 naïve prefix {SAMPLE_AKID} done"
        body = client.post("/analyze", json={"document": doc}).json()
        [finding] = body["findings"]
        raw = doc.encode("utf-8")
        assert raw[finding["span_start"] : finding["span_end"]].decode() == SAMPLE_AKID

    def test_second_identical_request_hits_cache(self, client):
        first = client.post("/analyze", json={"document": MIXED_DOC}).json()
        assert first["cache"]["misses"] == 2
        second = client.post("/analyze", json={"document": MIXED_DOC}).json()
        assert second["cache"]["misses"] == 0
        assert second["cache"]["hits"] == 2
        assert second["findings"] == first["findings"]

    def test_include_non_sensitive_option(self, client):
        body = client.post(
            "/analyze",
            json={"document": MIXED_DOC, "options": {"include_non_sensitive": True}},
        ).json()
        labels = sorted(f["label"] for f in body["findings"])
        assert labels == ["NonSensitive", "Secret"]

    def test_threshold_override(self, client):
        body = client.post(
            "/analyze", json={"document": MIXED_DOC, "options": {"threshold": 0.99}}
        ).json()
        assert body["findings"] == []

    def test_document_too_large(self, seed_catalog):
        analyzer = DocumentAnalyzer(
            seed_catalog, ClassifierSpec(kind="heuristic"), max_document_bytes=64
        )
        with TestClient(create_app(analyzer=analyzer)) as client:
            response = client.post("/analyze", json={"document": "x" * 100})
        assert response.status_code == 413

    def test_malformed_body_is_client_error(self, client):
        assert client.post("/analyze", json={"nope": 1}).status_code == 422

    def test_degraded_mode_honesty(self, seed_catalog):
        spec = ClassifierSpec(kind="remote", endpoint="http://127.0.0.1:9/s", timeout_s=0.3)
        with TestClient(create_app(analyzer=DocumentAnalyzer(seed_catalog, spec))) as client:
            body = client.post("/analyze", json={"document": MIXED_DOC}).json()
        assert body["warning"]
        assert len(body["findings"]) == 2  # nothing silently dropped
        assert all(f["label"] == "Unverified" for f in body["findings"])
        assert all(f["confidence"] is None for f in body["findings"])
        _response_validator().validate(body)

    def test_concurrent_requests_consistent(self, client):
        results: list[dict] = [{} for _ in range(8)]

        def hit(i: int) -> None:
            results[i] = client.post("/analyze", json={"document": MIXED_DOC}).json()

        threads = [threading.Thread(target=hit, args=(i,)) for i in range(8)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        findings = [r["findings"] for r in results]
        assert all(f == findings[0] for f in findings)


class TestHealthEndpoint:
    def test_fresh_start(self, client):
        body = client.get("/health").json()
        assert body["status"] == "ok"
        assert body["cache"]["hits"] == 0
        assert body["cache"]["misses"] == 0
        assert body["rules_enabled"] > 25
        assert body["uptime_s"] >= 0

    def test_counts_after_analyses(self, client):
        client.post("/analyze", json={"document": MIXED_DOC})
        body = client.get("/health").json()
        assert body["cache"]["misses"] == 2
        client.post("/analyze", json={"document": MIXED_DOC})
        body = client.get("/health").json()
        assert body["cache"]["hits"] == 2

    def test_catalog_version_exposed(self, client, seed_catalog):
        assert client.get("/health").json()["catalog_version"] == seed_catalog.version


class TestRedaction:
    def test_logs_never_contain_raw_secret(self, client, caplog):
        with caplog.at_level(logging.INFO, logger="leakwarden.service"):
            client.post("/analyze", json={"document": MIXED_DOC})
        joined = "\n".join(record.getMessage() for record in caplog.records)
        assert joined  # something was logged
        assert SAMPLE_AKID not in joined
        assert SAMPLE_AKID[:4] in joined  # masked form is logged

    def test_degraded_logs_also_redacted(self, seed_catalog, caplog):
        spec = ClassifierSpec(kind="remote", endpoint="http://127.0.0.1:9/s", timeout_s=0.3)
        with TestClient(create_app(analyzer=DocumentAnalyzer(seed_catalog, spec))) as client:
            with caplog.at_level(logging.INFO, logger="leakwarden.service"):
                client.post("/analyze", json={"document": MIXED_DOC})
        joined = "\n".join(record.getMessage() for record in caplog.records)
        assert SAMPLE_AKID not in joined


class TestBuildAnalyzer:
    def test_catalog_path_honored(self, tmp_path):
        path = tmp_path / "one-rule.yml"
        path.write_text(
            "rules:\n"
            "  - id: only\n"
            "    name: Only rule\n"
            "    pattern: 'tok_[a-z0-9]{12}'\n"
            "    category: other\n",
            encoding="utf-8",
        )
        analyzer = build_analyzer(ServiceConfig(catalog_path=path))
        assert analyzer.matcher.rule_ids == ("only",)

    def test_missing_catalog_raises(self, tmp_path):
        with pytest.raises(OSError):
            build_analyzer(ServiceConfig(catalog_path=tmp_path / "absent.yml"))
