import json
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"
SYNTHETIC = FIXTURES / "synthetic_corpus.jsonl"


def write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write((r if isinstance(r, str) else json.dumps(r)) + "\n")
    return path


def read_jsonl(path):
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


@pytest.fixture
def synthetic_corpus():
    return SYNTHETIC


def boy_record(query_id="q1", hasanswer=True):
    return {
        "schema_version": 1,
        "query_id": query_id,
        "query": "Who ran?",
        "answers": ["boy"],
        "documents": [{
            "text": "The boy ran.",
            "hasanswer": hasanswer,
            "graphs": [{"penman": "(b / boy)", "tokens": [{"text": "Ġboy", "logprob": -0.6931}]}],
        }],
    }


def pytest_terminal_summary(terminalreporter):
    import sys
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "VERDICTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
