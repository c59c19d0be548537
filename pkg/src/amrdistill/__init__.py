"""Context compression for retrieval-augmented QA via AMR concept distillation.

Each retrieved document is parsed into AMR graphs, concepts are scored by
the parser's subword entropy, a one-sample t-test keeps the informative
ones, and the survivors are realized back into source-text spans.
"""

from .distill import CompressedContext, CompressedDocument, compress_context, compress_document
from .entropy import ConceptEntropy, ScoredToken, concept_entropy, score_graph_concepts, token_entropy
from .evaluation import AccuracyTable, AucReport, accuracy_by_k, auc, auc_report, exact_match
from .penman import AmrGraph, ConceptNode, Constant, Relation, parse_penman, serialize_penman
from .pipeline import PipelineConfig, compress_instance, score_document
from .stats import SignificanceResult, p_value, select_significant, student_t_cdf
from .tfidf import build_idf, compress_tfidf

__version__ = "0.1.0"

__all__ = [
    "AccuracyTable", "AmrGraph", "AucReport", "CompressedContext", "CompressedDocument",
    "ConceptEntropy", "ConceptNode", "Constant", "PipelineConfig", "Relation", "ScoredToken",
    "SignificanceResult", "accuracy_by_k", "auc", "auc_report", "build_idf", "compress_context",
    "compress_document", "compress_instance", "compress_tfidf", "concept_entropy", "exact_match",
    "p_value", "parse_penman", "score_document", "score_graph_concepts", "select_significant",
    "serialize_penman", "student_t_cdf", "token_entropy",
]
