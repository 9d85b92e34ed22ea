from pathlib import Path

import pytest

from ambientkit.lexicon import load_lexicon

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def lexicon_file() -> Path:
    return DATA_DIR / "lexicon.csv"


@pytest.fixture(scope="session")
def gazetteer_file() -> Path:
    return DATA_DIR / "gazetteer.tsv"


@pytest.fixture(scope="session")
def lexicon(lexicon_file):
    return load_lexicon(lexicon_file)
