import os
import random
from pathlib import Path

import pytest

CORPUS = Path(__file__).resolve().parent.parent / "data" / "corpus"
os.environ["CATHOM_CORPUS_DIR"] = str(CORPUS)
os.environ.setdefault("CATHOM_THREADS", "1")

from src.services.corpus import resolve_category  # noqa: E402


@pytest.fixture
def rng():
    return random.Random(20240517)


@pytest.fixture
def corpus_dir():
    return CORPUS


@pytest.fixture
def cat():
    """Résolution d'une catégorie du corpus par son nom."""
    return resolve_category


@pytest.fixture
def chain2():
    return resolve_category("chain2")


@pytest.fixture
def cospan():
    return resolve_category("cospan")


@pytest.fixture
def bz2():
    return resolve_category("bz2")


@pytest.fixture
def delta2():
    return resolve_category("delta2")
