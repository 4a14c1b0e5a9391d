from __future__ import annotations

import json
from pathlib import Path

import pytest

from sqlmend.tables import load_problem_dir

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
PROBLEMS_DIR = FIXTURES / "problems"


@pytest.fixture(scope="session")
def problems():
    return load_problem_dir(PROBLEMS_DIR)


@pytest.fixture(scope="session")
def tablev_corpus():
    lines = (FIXTURES / "corpus_tablev.jsonl").read_text().splitlines()
    return [json.loads(line) for line in lines if line.strip()]


@pytest.fixture(scope="session")
def triage_corpus():
    lines = (FIXTURES / "corpus_triage.jsonl").read_text().splitlines()
    return [json.loads(line) for line in lines if line.strip()]
