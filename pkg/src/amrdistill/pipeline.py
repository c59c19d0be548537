"""End-to-end compression of one QA record: score, select, realize."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Tuple

from .corpus import Document, QaInstance, SCHEMA_VERSION
from .distill import CompressedDocument, compress_context, compress_document
from .entropy import DEFAULT_BOUNDARY_PREFIX, ConceptEntropy, score_graph_concepts
from .evaluation import (K_MAX, LONG_INTERVAL, MATCH_POLICIES, STANDARD_INTERVAL, SUBSTRING,
                         build_prompt, compression_ratio)
from .penman import AmrGraph
from .stats import HIGH_ONLY, SELECTION_MODES, SignificanceResult, select_significant


@dataclass(frozen=True)
class PipelineConfig:
    alpha: float = 0.3
    selection_mode: str = HIGH_ONLY
    boundary_prefix: str = DEFAULT_BOUNDARY_PREFIX
    match_policy: str = SUBSTRING
    k_max: int = K_MAX
    keep_fraction: float = 0.5
    interval_standard: Tuple[int, int] = STANDARD_INTERVAL
    interval_long: Tuple[int, int] = LONG_INTERVAL
    ddof: int = 1
    workers: int = 1

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha must be in (0, 1], got {self.alpha}")
        if self.selection_mode not in SELECTION_MODES:
            raise ValueError(f"selection_mode must be one of {SELECTION_MODES}")
        if not self.boundary_prefix:
            raise ValueError("boundary_prefix must be non-empty")
        if self.match_policy not in MATCH_POLICIES:
            raise ValueError(f"match_policy must be one of {MATCH_POLICIES}")
        if self.k_max < 1:
            raise ValueError("k_max must be >= 1")
        if not 0.0 < self.keep_fraction <= 1.0:
            raise ValueError(f"keep_fraction must be in (0, 1], got {self.keep_fraction}")
        for lo, hi in (self.interval_standard, self.interval_long):
            if not 1 <= lo <= hi:
                raise ValueError(f"bad K interval [{lo}, {hi}]")
        if self.ddof not in (0, 1):
            raise ValueError("ddof must be 0 or 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass
class DocumentScores:
    graphs: List[AmrGraph]
    entropies: List[ConceptEntropy]
    results: List[SignificanceResult]
    unmatched: int = 0
    node_count: int = 0

    @property
    def degenerate(self) -> bool:
        return any(r.degenerate for r in self.results)

    @property
    def selected(self) -> int:
        return sum(r.selected for r in self.results)


def score_document(doc: Document, config: PipelineConfig = PipelineConfig()) -> DocumentScores:
    """Entropy and significance for every alignable concept of one document.

    All sentence graphs of the document form one population.
    """
    graphs = [sg.parse(i) for i, sg in enumerate(doc.graphs)]
    entropies: List[ConceptEntropy] = []
    unmatched: list = []
    for g, sg in zip(graphs, doc.graphs):
        if sg.tokens:
            entropies.extend(score_graph_concepts(g, sg.tokens, config.boundary_prefix, unmatched))
        else:
            unmatched.extend(g.nodes.values())
    results = (select_significant(entropies, config.alpha, config.selection_mode, config.ddof)
               if entropies else [])
    return DocumentScores(graphs, entropies, results, len(unmatched),
                          sum(len(g.nodes) for g in graphs))


@dataclass
class CompressedRecord:
    instance: QaInstance
    documents: List[CompressedDocument]
    scores: List[DocumentScores]
    context: str
    tau: float
    doc_taus: List[float] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "query_id": self.instance.query_id,
            "k": self.instance.k,
            "context": self.context,
            "tau": self.tau,
            "prompt": build_prompt(self.context, self.instance.query),
            "documents": [
                {
                    "index": i,
                    "text": cd.text,
                    "tau": tau,
                    "concepts": len(s.entropies),
                    "selected": s.selected,
                    "unmatched": s.unmatched,
                    "degenerate": s.degenerate,
                }
                for i, (cd, s, tau) in enumerate(zip(self.documents, self.scores, self.doc_taus))
            ],
        }


def _ratio(original: str, compressed: str) -> float:
    return compression_ratio(original, compressed) if original.split() else 0.0


def compress_instance(instance: QaInstance, config: PipelineConfig = PipelineConfig()
                      ) -> CompressedRecord:
    """Compress an already filtered instance document by document."""
    docs, scores, taus = [], [], []
    for i, doc in enumerate(instance.documents):
        s = score_document(doc, config)
        cd = compress_document(s.graphs, s.results, doc.text, f"{instance.query_id}/{i}")
        docs.append(cd)
        scores.append(s)
        taus.append(_ratio(doc.text, cd.text))
    context = compress_context(docs)
    original = "\n".join(d.text for d in instance.documents)
    return CompressedRecord(instance, docs, scores, context.text, _ratio(original, context.text), taus)
