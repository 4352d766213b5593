"""Shared fixtures: the 20-sentence annotated bitext under tests/data."""

import logging
from pathlib import Path

import pytest

from src.corpus_model import load_bitext_files

DATA_DIR = Path(__file__).parent / "data"

# Hand-enumerated sentence sets of the fixture per (phenomenon, minimum distance)
EXPECTED_SETS = {
    "particle": {0: {0, 1, 2, 8, 12, 13, 14, 19}, 1: {1, 2, 8, 12, 13, 14, 19},
                 2: {1, 2, 12, 14}, 3: {2, 12}, 5: set()},
    "reflexive": {0: {3, 4, 11, 14}, 1: {4, 11}, 2: {4, 11}, 3: {11}, 5: {11}},
    "prep_stranding": {0: {5, 6, 7, 18}, 1: {6, 7, 18}, 2: {6, 7}, 3: {7}, 5: {7}},
}

# (record_id, head, dep, distance) of every lexical instance in the fixture
EXPECTED_INSTANCES = {
    "particle": [(0, 2, 3, 0), (1, 2, 5, 2), (2, 2, 7, 4), (8, 1, 3, 1), (12, 2, 6, 3),
                 (13, 2, 4, 1), (13, 6, 8, 1), (14, 2, 5, 2), (19, 2, 4, 1)],
    "reflexive": [(3, 2, 3, 0), (4, 4, 1, 2), (11, 7, 1, 5), (14, 2, 3, 0)],
    "prep_stranding": [(5, 4, 5, 0), (6, 5, 8, 2), (7, 5, 11, 5), (18, 4, 6, 1)],
}


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture
def fixture_paths():
    return {
        "src": DATA_DIR / "fixture.src",
        "tgt": DATA_DIR / "fixture.tgt",
        "conllu": DATA_DIR / "fixture.conllu",
        "align": DATA_DIR / "fixture.align",
    }


@pytest.fixture
def records(fixture_paths):
    return load_bitext_files(fixture_paths["src"], fixture_paths["tgt"],
                             fixture_paths["conllu"], fixture_paths["align"])


def write_lines(path: Path, lines) -> Path:
    path.write_text("".join(f"{line}\n" for line in lines), encoding="utf-8")
    return path


@pytest.fixture(autouse=True)
def restore_root_logger():
    # CLI runs reconfigure the root logger with force=True
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)
