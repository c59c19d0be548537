"""Line-delimited JSON records for corpora and predictions.

Corpus record (one per line)::

    {"schema_version": 1, "query_id": "q1", "query": "...", "answers": ["..."],
     "documents": [{"text": "...", "hasanswer": true,
                    "graphs": [{"penman": "(b / boy)",
                                "tokens": [{"text": "Ġboy", "logprob": -0.69}]}]}]}

``logprob`` is a natural log. ``schema_version`` is optional and
defaults to 1. Prediction record::

    {"query_id": "q1", "model_id": "gpt-neo-1.3b", "method_id": "Ours", "generated": "..."}
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Iterator, List, Optional, Tuple

import jsonschema

from .entropy import ScoredToken
from .penman import AmrGraph, parse_penman

SCHEMA_VERSION = 1

CORPUS_SCHEMA = {
    "type": "object",
    "required": ["query_id", "query", "answers", "documents"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "query_id": {"type": ["string", "integer"]},
        "query": {"type": "string"},
        "answers": {"type": "array", "items": {"type": "string"}, "minItems": 1},
        "documents": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["text", "hasanswer"],
                "properties": {
                    "text": {"type": "string"},
                    "hasanswer": {"type": "boolean"},
                    "graphs": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["penman", "tokens"],
                            "properties": {
                                "penman": {"type": "string"},
                                "tokens": {
                                    "type": "array",
                                    "items": {
                                        "type": "object",
                                        "required": ["text", "logprob"],
                                        "properties": {
                                            "text": {"type": "string"},
                                            "logprob": {"type": "number", "maximum": 0},
                                        },
                                    },
                                },
                            },
                        },
                    },
                },
            },
        },
    },
}

PREDICTION_SCHEMA = {
    "type": "object",
    "required": ["query_id", "model_id", "method_id", "generated"],
    "properties": {
        "query_id": {"type": ["string", "integer"]},
        "model_id": {"type": "string"},
        "method_id": {"type": "string"},
        "generated": {"type": "string"},
    },
}

_corpus_validator = jsonschema.Draft7Validator(CORPUS_SCHEMA)
_prediction_validator = jsonschema.Draft7Validator(PREDICTION_SCHEMA)


class SchemaError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class SentenceGraph:
    penman: str
    tokens: Tuple[ScoredToken, ...] = ()

    def parse(self, sentence_index: int) -> AmrGraph:
        return parse_penman(self.penman, source_sentence_index=sentence_index)


@dataclass(frozen=True)
class Document:
    text: str
    hasanswer: bool
    graphs: Tuple[SentenceGraph, ...] = ()


@dataclass(frozen=True)
class QaInstance:
    query_id: str
    query: str
    answers: Tuple[str, ...]
    documents: Tuple[Document, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not self.answers:
            raise ValueError(f"query {self.query_id!r} has no answers")

    @property
    def k(self) -> int:
        return len(self.documents)


@dataclass(frozen=True)
class PredictionRecord:
    query_id: str
    model_id: str
    method_id: str
    generated: str


def filter_hasanswer(instance: QaInstance) -> QaInstance:
    """Drop documents that do not contain a gold answer."""
    kept = tuple(d for d in instance.documents if d.hasanswer)
    return replace(instance, documents=kept)


def instance_from_json(obj: dict) -> QaInstance:
    docs = []
    for d in obj["documents"]:
        graphs = tuple(
            SentenceGraph(
                g["penman"],
                tuple(ScoredToken(t["text"], float(t["logprob"]), i)
                      for i, t in enumerate(g["tokens"])),
            )
            for g in d.get("graphs", ())
        )
        docs.append(Document(d["text"], d["hasanswer"], graphs))
    return QaInstance(str(obj["query_id"]), obj["query"], tuple(obj["answers"]), tuple(docs))


def _iter_json_lines(path) -> Iterator[Tuple[int, Optional[dict], Optional[str]]]:
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                yield lineno, json.loads(line), None
            except json.JSONDecodeError as exc:
                yield lineno, None, f"invalid JSON: {exc.msg}"


def _first_error(validator, obj) -> Optional[str]:
    error = next(iter(validator.iter_errors(obj)), None)
    if error is None:
        return None
    where = "/".join(str(p) for p in error.absolute_path) or "<record>"
    return f"{where}: {error.message}"


def read_corpus(path) -> Iterator[Tuple[int, object]]:
    """Yield ``(line_number, QaInstance | SchemaError)`` for each record.

    Invalid records are yielded as errors rather than raised so that a
    batch can continue past them.
    """
    for lineno, obj, problem in _iter_json_lines(path):
        if problem is None:
            problem = _first_error(_corpus_validator, obj)
        if problem is not None:
            yield lineno, SchemaError(lineno, problem)
            continue
        try:
            yield lineno, instance_from_json(obj)
        except ValueError as exc:
            yield lineno, SchemaError(lineno, str(exc))


def read_predictions(path) -> Tuple[List[PredictionRecord], List[SchemaError]]:
    records, errors = [], []
    for lineno, obj, problem in _iter_json_lines(path):
        if problem is None:
            problem = _first_error(_prediction_validator, obj)
        if problem is not None:
            errors.append(SchemaError(lineno, problem))
            continue
        records.append(PredictionRecord(str(obj["query_id"]), obj["model_id"],
                                        obj["method_id"], obj["generated"]))
    return records, errors
