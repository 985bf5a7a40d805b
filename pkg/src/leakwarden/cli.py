"""Command line interface: serve, scan, eval, bench.

Every flag can also be set through an environment variable with the
LEAKWARDEN_ prefix (e.g. LEAKWARDEN_CATALOG, LEAKWARDEN_THRESHOLD,
LEAKWARDEN_SCAN_FORMAT for subcommand-scoped options).
"""

from __future__ import annotations

import json
import sys
from importlib import resources
from pathlib import Path

import click

from .cache import DEFAULT_CAPACITY
from .catalog import CatalogError
from .classify import DEFAULT_THRESHOLD, mask_secret
from .evaluation import EvalReport, load_corpus, measure_latency
from .pipeline import DocumentAnalyzer
from .scanner import DocumentTooLargeError
from .service import (
    DEFAULT_HOST,
    DEFAULT_PORT,
    EphemeralServer,
    ServiceConfig,
    build_analyzer,
    create_app,
)

EXIT_CLEAN = 0
EXIT_FINDINGS = 1
EXIT_ERROR = 2


def _shared_options(command):
    for option in reversed(
        [
            click.option(
                "--catalog",
                type=click.Path(exists=True, dir_okay=False, path_type=Path),
                default=None,
                help="Rule catalog file (default: packaged seed catalog).",
            ),
            click.option(
                "--classifier",
                type=click.Choice(["heuristic", "remote"]),
                default="heuristic",
                show_default=True,
            ),
            click.option("--endpoint", default=None, help="Remote classifier URL."),
            click.option(
                "--threshold",
                type=click.FloatRange(0.0, 1.0),
                default=DEFAULT_THRESHOLD,
                show_default=True,
            ),
            click.option(
                "--cache-capacity", type=click.IntRange(min=0), default=DEFAULT_CAPACITY,
                show_default=True,
            ),
        ]
    ):
        command = option(command)
    return command


def _config(catalog, classifier, endpoint, threshold, cache_capacity, port=DEFAULT_PORT, host=DEFAULT_HOST):
    return ServiceConfig(
        host=host,
        port=port,
        catalog_path=catalog,
        classifier=classifier,
        endpoint=endpoint,
        threshold=threshold,
        cache_capacity=cache_capacity,
    )


def _analyzer_or_fail(config: ServiceConfig) -> DocumentAnalyzer:
    try:
        return build_analyzer(config)
    except (CatalogError, OSError, ValueError) as exc:
        raise click.ClickException(str(exc)) from exc


@click.group()
def cli() -> None:
    """Secret-leak prevention: scan text for credentials before it ships."""


@cli.command()
@_shared_options
@click.option("--host", default=DEFAULT_HOST, show_default=True)
@click.option("--port", type=int, default=DEFAULT_PORT, show_default=True)
def serve(catalog, classifier, endpoint, threshold, cache_capacity, host, port) -> None:
    """Run the local analysis service until terminated."""
    import uvicorn

    config = _config(catalog, classifier, endpoint, threshold, cache_capacity, port, host)
    try:
        app = create_app(config)
    except (CatalogError, OSError, ValueError) as exc:
        path = f" ({config.catalog_path})" if config.catalog_path else ""
        raise click.ClickException(f"startup failed{path}: {exc}") from exc
    click.echo(f"leakwarden service on http://{host}:{port} (Ctrl-C to stop)")
    uvicorn.run(app, host=host, port=port, log_level="info")


def _iter_files(paths: tuple[Path, ...]):
    for path in paths:
        if path.is_dir():
            yield from sorted(p for p in path.rglob("*") if p.is_file())
        else:
            yield path


@cli.command()
@_shared_options
@click.option("--format", "output_format", type=click.Choice(["text", "json"]), default="text",
              show_default=True)
@click.argument("paths", nargs=-1, required=True, type=click.Path(path_type=Path))
def scan(catalog, classifier, endpoint, threshold, cache_capacity, output_format, paths) -> None:
    """Scan files or directories; exit 1 if findings exist, 2 on errors."""
    analyzer = _analyzer_or_fail(_config(catalog, classifier, endpoint, threshold, cache_capacity))
    report = []
    total_findings = 0
    had_error = False

    for path in _iter_files(paths):
        entry: dict = {"path": str(path), "findings": [], "error": None}
        try:
            text = path.read_text(encoding="utf-8", errors="replace")
            result = analyzer.analyze(text)
        except (OSError, DocumentTooLargeError) as exc:
            entry["error"] = str(exc)
            had_error = True
            report.append(entry)
            continue
        if result.degraded:
            entry["error"] = result.warning
            had_error = True
        for finding in result.findings:
            candidate = finding.candidate
            entry["findings"].append(
                {
                    "span_start": candidate.start,
                    "span_end": candidate.end,
                    "rule_id": candidate.rule_id,
                    "confidence": finding.classification.confidence,
                    "masked_text": mask_secret(candidate.text),
                }
            )
        total_findings += len(entry["findings"])
        report.append(entry)

    if output_format == "json":
        click.echo(json.dumps({"files": report, "total_findings": total_findings}, indent=1))
    else:
        for entry in report:
            if entry["error"]:
                click.echo(f"{entry['path']}: ERROR: {entry['error']}", err=True)
            for f in entry["findings"]:
                click.echo(
                    f"{entry['path']}: [{f['span_start']},{f['span_end']}) "
                    f"{f['rule_id']} confidence={f['confidence']:.2f} {f['masked_text']}"
                )
        click.echo(f"{total_findings} finding(s) in {len(report)} file(s)")

    if had_error:
        sys.exit(EXIT_ERROR)
    sys.exit(EXIT_FINDINGS if total_findings else EXIT_CLEAN)


def _load_corpus_or_default(corpus: Path | None):
    if corpus is not None:
        return load_corpus(corpus)
    packaged = resources.files("leakwarden.data").joinpath("desk_corpus.json").read_text("utf-8")
    return load_corpus(packaged)


def _format_scores(name: str, scores) -> list[str]:
    fmt = lambda m: f"P={m.precision:6.2%} R={m.recall:6.2%} F1={m.f1:6.2%}"
    return [
        f"{name}:",
        f"  secret         {fmt(scores.secret)}",
        f"  non-sensitive  {fmt(scores.non_sensitive)}",
        f"  macro          {fmt(scores.macro)}",
        f"  predictions={scores.n_predictions} counts tp={scores.secret_counts.tp} "
        f"fp={scores.secret_counts.fp} fn={scores.secret_counts.fn} tn={scores.secret_counts.tn}",
    ]


@cli.command(name="eval")
@_shared_options
@click.option("--corpus", type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None,
              help="Labeled corpus JSON (default: packaged desk corpus).")
@click.option("--format", "output_format", type=click.Choice(["text", "json"]), default="text",
              show_default=True)
def eval_cmd(catalog, classifier, endpoint, threshold, cache_capacity, corpus, output_format) -> None:
    """Evaluate regex-only baseline vs full pipeline on a labeled corpus."""
    from .evaluation import evaluate_pipeline

    analyzer = _analyzer_or_fail(_config(catalog, classifier, endpoint, threshold, cache_capacity))
    report: EvalReport = evaluate_pipeline(_load_corpus_or_default(corpus), analyzer)

    if output_format == "json":
        click.echo(json.dumps(report.to_dict(), indent=1))
        return
    lines = [f"documents={report.documents} candidates={report.candidates}"]
    lines += _format_scores("regex-only baseline", report.regex_only)
    lines += _format_scores("full pipeline", report.pipeline)
    for warning in report.warnings:
        lines.append(f"warning: {warning}")
    click.echo("\n".join(lines))


@cli.command()
@_shared_options
@click.option("--corpus", type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None)
@click.option("--repetitions", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--target", default=None, help="URL of a running service (default: ephemeral server).")
@click.option("--format", "output_format", type=click.Choice(["text", "json"]), default="text",
              show_default=True)
def bench(catalog, classifier, endpoint, threshold, cache_capacity, corpus, repetitions, target,
          output_format) -> None:
    """Measure /analyze latency over a corpus of documents."""
    documents = [doc.text for doc in _load_corpus_or_default(corpus).documents]
    if target is None:
        config = _config(catalog, classifier, endpoint, threshold, cache_capacity)
        app = create_app(config, analyzer=_analyzer_or_fail(config))
        with EphemeralServer(app) as server:
            latency = measure_latency(documents, server.base_url, repetitions)
    else:
        latency = measure_latency(documents, target, repetitions)

    if output_format == "json":
        click.echo(json.dumps(latency.to_dict(), indent=1))
        return
    click.echo(
        f"samples={len(latency.samples)} mean={latency.mean_ms:.1f}ms "
        f"p50={latency.p50_ms:.1f}ms p95={latency.p95_ms:.1f}ms "
        f"(extraction mean={latency.mean_extraction_ms:.2f}ms, "
        f"classification mean={latency.mean_classification_ms:.2f}ms)"
    )


def main() -> None:
    cli(auto_envvar_prefix="LEAKWARDEN")


if __name__ == "__main__":
    main()
