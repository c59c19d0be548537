"""TF-IDF term retention, the statistical compression baseline."""

from __future__ import annotations

import math
import string
from collections import Counter
from dataclasses import dataclass
from typing import Dict, List, Sequence

_PUNCT = string.punctuation + "“”‘’«»"


class EmptyCorpus(ValueError):
    pass


class EmptyDocument(ValueError):
    pass


def term_of(token: str) -> str:
    """Lowercased token with surrounding punctuation removed."""
    return token.strip(_PUNCT).lower()


@dataclass(frozen=True)
class IdfTable:
    document_count: int
    term_df: Dict[str, int]

    def __post_init__(self):
        if self.document_count < 1:
            raise ValueError("document_count must be >= 1")
        for term, df in self.term_df.items():
            if not 1 <= df <= self.document_count:
                raise ValueError(f"df({term!r}) = {df} outside [1, {self.document_count}]")

    def idf(self, term: str) -> float:
        """``ln(N / df)``. Terms never seen are scored as if they occurred
        in a single document."""
        df = self.term_df.get(term, 1)
        return math.log(self.document_count / df)


def build_idf(corpus: Sequence[str]) -> IdfTable:
    if not corpus:
        raise EmptyCorpus("cannot build an IDF table from an empty corpus")
    df: Counter = Counter()
    for doc in corpus:
        df.update({t for t in map(term_of, doc.split()) if t})
    return IdfTable(len(corpus), dict(df))


def retention_budget(n_tokens: int, keep_fraction: float) -> int:
    # ceil with slack so 0.7 * 10 does not round up to 8
    return min(n_tokens, math.ceil(keep_fraction * n_tokens - 1e-9))


def compress_tfidf(doc: str, idf: IdfTable, keep_fraction: float = 0.5) -> str:
    """Keep the ``ceil(keep_fraction * n)`` highest-scoring tokens of ``doc``.

    Each whitespace token is scored ``tf(term, doc) * idf(term)``. Ties go
    to the earlier token; the kept tokens are emitted in their original
    order and form.
    """
    if not 0.0 < keep_fraction <= 1.0:
        raise ValueError(f"keep_fraction must be in (0, 1], got {keep_fraction}")
    tokens = doc.split()
    if not tokens:
        raise EmptyDocument("cannot compress an empty document")
    terms = [term_of(t) for t in tokens]
    tf = Counter(t for t in terms if t)
    scores: List[float] = [tf[t] * idf.idf(t) if t else 0.0 for t in terms]

    budget = retention_budget(len(tokens), keep_fraction)
    ranked = sorted(range(len(tokens)), key=lambda i: (-scores[i], i))
    keep = sorted(ranked[:budget])
    return " ".join(tokens[i] for i in keep)
