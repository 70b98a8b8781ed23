import csv
import sys
from pathlib import Path

import pytest

DATA_DIR = Path(__file__).parent / "data"
sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture(scope="session")
def fixture_rows() -> list[dict]:
    with open(DATA_DIR / "mini_truth.csv", encoding="utf-8", newline="") as handle:
        return list(csv.DictReader(handle))


@pytest.fixture(scope="session")
def fixture_mapping(fixture_rows) -> dict[str, str]:
    return {row["Content"]: row["EventTemplate"] for row in fixture_rows}


@pytest.fixture(scope="session")
def fixture_log_path() -> Path:
    return DATA_DIR / "mini.log"


@pytest.fixture(scope="session")
def fixture_truth_path() -> Path:
    return DATA_DIR / "mini_truth.csv"
