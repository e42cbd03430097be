from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def mini():
    """Paths of the shipped 10-doc / 3-topic / 2-task fixture."""
    root = FIXTURES / "mini"
    return {
        "corpus": str(root / "corpus.jsonl"),
        "topics": str(root / "topics.jsonl"),
        "tasks": str(root / "tasks.jsonl"),
        "manual_map": str(root / "manual_map.txt"),
        "lexicon": str(root / "lexicon.txt"),
        "qrels": str(root / "qrels.txt"),
        "vectors": str(root / "vectors.txt"),
    }


@pytest.fixture
def golden_dir():
    return FIXTURES / "golden"
