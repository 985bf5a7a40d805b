#!/usr/bin/env python3
"""Regenerate the frozen desk corpus fixture.

The corpus is deterministic (fixed seed), but tests and acceptance bounds
assert against the frozen file, not against regeneration: rerun this only when
the catalog or the synthesizer changes, then re-derive the frozen bounds.
"""

from pathlib import Path

from leakwarden.catalog import load_default_catalog
from leakwarden.evaluation import dump_corpus
from leakwarden.synth import build_desk_corpus

OUT = Path(__file__).resolve().parent.parent / "src" / "leakwarden" / "data" / "desk_corpus.json"


def main() -> None:
    corpus = build_desk_corpus(load_default_catalog())
    OUT.write_text(dump_corpus(corpus), encoding="utf-8")
    n_secret = sum(1 for d in corpus.documents for a in d.annotations if a.label == "Secret")
    n_benign = sum(1 for d in corpus.documents for a in d.annotations if a.label == "NonSensitive")
    sizes = sorted(len(d.text.encode("utf-8")) for d in corpus.documents)
    print(f"wrote {OUT}")
    print(f"documents={len(corpus)} secret={n_secret} benign={n_benign}")
    print(f"bytes min={sizes[0]} p50={sizes[len(sizes) // 2]} max={sizes[-1]}")


if __name__ == "__main__":
    main()
