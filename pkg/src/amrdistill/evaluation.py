"""QA evaluation: exact match, accuracy against K, AUC and spread across models.

K is the number of answer-bearing documents a query keeps after
filtering. Accuracy is tabulated per K, the accuracy-vs-K curve is
integrated with the trapezoid rule over a standard window ``[1, 10]``
and a long-context window ``[6, 10]``, and stability across backbone
models is the sample standard deviation of their AUCs.
"""

from __future__ import annotations

import math
import re
import statistics
import string
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .corpus import PredictionRecord, QaInstance, filter_hasanswer

STANDARD_INTERVAL = (1, 10)
LONG_INTERVAL = (6, 10)
K_MAX = 10

SUBSTRING = "substring"
STRICT = "strict"
MATCH_POLICIES = (SUBSTRING, STRICT)

PROMPT_TEMPLATE = ("Refer to the following facts to answer the question. "
                   "Facts: {facts}. Question: {query}")


class MissingBucket(ValueError):
    def __init__(self, k: int, where: str = ""):
        super().__init__(f"no accuracy for K={k}{' (' + where + ')' if where else ''}")
        self.k = k


class UnresolvedQuery(KeyError):
    def __init__(self, query_id: str):
        super().__init__(query_id)
        self.query_id = query_id


class TooFewModels(ValueError):
    pass


class ShapeMismatch(ValueError):
    pass


class EmptyOriginal(ValueError):
    pass


@dataclass(frozen=True)
class AccuracyTable:
    model_id: str
    method_id: str
    acc_by_k: Dict[int, float]
    counts: Dict[int, int] = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class AucReport:
    """AUCs of one method across backbone models.

    ``auc_standard``/``auc_long`` are means over models; ``sigma_*`` are
    the sample standard deviations, or ``None`` with a single model.
    """
    method_id: str
    per_model: Dict[str, Tuple[float, float]]
    auc_standard: float
    auc_long: float
    sigma_s: Optional[float]
    sigma_l: Optional[float]


def build_prompt(compressed: str, query: str) -> str:
    return PROMPT_TEMPLATE.format(facts=compressed, query=query)


_PUNCT = string.punctuation + "“”‘’«»"


def normalize_answer(text: str) -> str:
    """Lowercase, collapse whitespace, strip surrounding punctuation."""
    text = re.sub(r"\s+", " ", text.lower()).strip()
    return text.strip(_PUNCT + " ")


def exact_match(generated: str, answers: Sequence[str], policy: str = SUBSTRING) -> bool:
    """Does any gold answer match the generation?

    ``substring``: a normalized answer occurs inside the normalized
    generation. ``strict``: the two are equal after normalization.
    """
    if not answers:
        raise ValueError("need at least one gold answer")
    if policy not in MATCH_POLICIES:
        raise ValueError(f"policy must be one of {MATCH_POLICIES}, got {policy!r}")
    gen = normalize_answer(generated)
    for answer in answers:
        gold = normalize_answer(answer)
        if not gold:
            continue
        if gen == gold or (policy == SUBSTRING and gold in gen):
            return True
    return False


def bucket_instances(gold: Iterable[QaInstance], k_max: int = K_MAX) -> Dict[str, QaInstance]:
    """Filter every instance and keep those with ``1 <= K <= k_max``."""
    kept = {}
    for inst in gold:
        inst = filter_hasanswer(inst)
        if 1 <= inst.k <= k_max:
            kept[inst.query_id] = inst
    return kept


def accuracy_by_k(preds: Iterable[PredictionRecord], gold: Iterable[QaInstance],
                  policy: str = SUBSTRING, k_max: int = K_MAX
                  ) -> Dict[Tuple[str, str], AccuracyTable]:
    """Percent accuracy per K for every ``(model_id, method_id)`` pair.

    Predictions for queries dropped by filtering (K outside ``1..k_max``)
    are ignored. Every K present in the gold data must have at least one
    prediction for each pair, otherwise :class:`MissingBucket` is raised.
    """
    gold_list = list(gold)
    all_ids = {g.query_id for g in gold_list}
    instances = bucket_instances(gold_list, k_max)
    expected_ks = sorted({inst.k for inst in instances.values()})

    hits: Dict[Tuple[str, str], Dict[int, List[int]]] = defaultdict(lambda: defaultdict(list))
    for p in preds:
        if p.query_id not in all_ids:
            raise UnresolvedQuery(p.query_id)
        inst = instances.get(p.query_id)
        if inst is None:
            continue
        ok = exact_match(p.generated, inst.answers, policy)
        hits[(p.model_id, p.method_id)][inst.k].append(int(ok))

    tables = {}
    for key in sorted(hits):
        by_k = hits[key]
        for k in expected_ks:
            if not by_k.get(k):
                raise MissingBucket(k, f"model {key[0]}, method {key[1]}")
        tables[key] = AccuracyTable(
            key[0], key[1],
            {k: 100.0 * sum(v) / len(v) for k, v in sorted(by_k.items())},
            {k: len(v) for k, v in sorted(by_k.items())},
        )
    return tables


def auc(acc_by_k: Mapping[int, float], interval: Tuple[int, int] = STANDARD_INTERVAL) -> float:
    """Trapezoidal area under accuracy-vs-K with unit spacing."""
    lo, hi = interval
    if lo > hi:
        raise ValueError(f"empty interval {interval}")
    for k in range(lo, hi + 1):
        if k not in acc_by_k:
            raise MissingBucket(k)
    return math.fsum((acc_by_k[k] + acc_by_k[k + 1]) / 2.0 for k in range(lo, hi))


def sigma_across_models(aucs: Sequence[float]) -> float:
    if len(aucs) < 2:
        raise TooFewModels(f"need at least two models, got {len(aucs)}")
    return statistics.stdev(aucs)


def auc_report(tables: Sequence[AccuracyTable],
               interval_standard: Tuple[int, int] = STANDARD_INTERVAL,
               interval_long: Tuple[int, int] = LONG_INTERVAL) -> AucReport:
    """Aggregate one method's per-model accuracy tables into AUCs and sigmas."""
    if not tables:
        raise ValueError("no accuracy tables")
    methods = {t.method_id for t in tables}
    if len(methods) != 1:
        raise ValueError(f"tables mix methods {sorted(methods)}")
    per_model = {t.model_id: (auc(t.acc_by_k, interval_standard), auc(t.acc_by_k, interval_long))
                 for t in tables}
    return _report(methods.pop(), per_model)


def _report(method_id: str, per_model: Dict[str, Tuple[float, float]]) -> AucReport:
    s = [v[0] for v in per_model.values()]
    l = [v[1] for v in per_model.values()]
    many = len(per_model) >= 2
    return AucReport(
        method_id, per_model,
        statistics.fmean(s), statistics.fmean(l),
        sigma_across_models(s) if many else None,
        sigma_across_models(l) if many else None,
    )


def delta_rows(ours: Union[AccuracyTable, AucReport], vanilla: Union[AccuracyTable, AucReport]
               ) -> Union[AccuracyTable, AucReport]:
    """Elementwise ``ours - vanilla`` for two tables or two reports of the same shape."""
    if type(ours) is not type(vanilla):
        raise ShapeMismatch(f"cannot subtract {type(vanilla).__name__} from {type(ours).__name__}")
    if isinstance(ours, AccuracyTable):
        if ours.acc_by_k.keys() != vanilla.acc_by_k.keys():
            raise ShapeMismatch("accuracy tables cover different K values")
        return AccuracyTable(
            ours.model_id, f"{ours.method_id}-{vanilla.method_id}",
            {k: ours.acc_by_k[k] - vanilla.acc_by_k[k] for k in ours.acc_by_k},
        )
    if ours.per_model.keys() != vanilla.per_model.keys():
        raise ShapeMismatch("reports cover different models")
    per_model = {
        m: (ours.per_model[m][0] - vanilla.per_model[m][0],
            ours.per_model[m][1] - vanilla.per_model[m][1])
        for m in ours.per_model
    }
    return _report(f"{ours.method_id}-{vanilla.method_id}", per_model)


def compression_ratio(original: str, compressed: str) -> float:
    """Whitespace-token count of ``compressed`` over that of ``original``."""
    n = len(original.split())
    if n == 0:
        raise EmptyOriginal("original text has no tokens")
    return len(compressed.split()) / n
