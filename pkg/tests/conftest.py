from __future__ import annotations

from importlib import resources

import pytest

from leakwarden.catalog import compile_catalog, load_default_catalog
from leakwarden.classify import ClassifierSpec
from leakwarden.evaluation import load_corpus
from leakwarden.pipeline import DocumentAnalyzer

# A fixed-format access key id used across tests: AKIA + 16 chars, high entropy,
# clear of every placeholder lexicon term. Not a real credential.
SAMPLE_AKID = "AKIATQ7MZP2W9C4XRV5B"


@pytest.fixture(scope="session")
def seed_catalog():
    return load_default_catalog()


@pytest.fixture(scope="session")
def matcher(seed_catalog):
    return compile_catalog(seed_catalog)


@pytest.fixture()
def analyzer(seed_catalog):
    return DocumentAnalyzer(seed_catalog, ClassifierSpec(kind="heuristic"))


@pytest.fixture(scope="session")
def desk_corpus():
    text = resources.files("leakwarden.data").joinpath("desk_corpus.json").read_text("utf-8")
    return load_corpus(text)


@pytest.fixture(scope="session")
def placeholder_fixtures():
    text = resources.files("leakwarden.data").joinpath("placeholders.txt").read_text("utf-8")
    return [line for line in text.splitlines() if line.strip() and not line.startswith("#")]
