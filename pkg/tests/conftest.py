from pathlib import Path

import pytest

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def sample_dir() -> Path:
    return DATA_DIR / "dota_sample"


@pytest.fixture(scope="session")
def golden_dir() -> Path:
    return DATA_DIR / "goldens"
