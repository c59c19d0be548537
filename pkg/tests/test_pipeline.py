"""Pipeline checks against a brute-force re-derivation on the synthetic corpus."""

import math
import re

import numpy as np
import pytest
from scipy import stats as sps

from amrdistill.corpus import filter_hasanswer, read_corpus
from amrdistill.pipeline import PipelineConfig, compress_instance, score_document

from conftest import SYNTHETIC


def oracle_concept_entropies(penman, tokens):
    """Label -> entropies, straight from the raw token list.

    Words are runs starting at a "Ġ" token; a word is a concept label
    exactly when the previous word is "/".
    """
    words, prev = [], None
    for t in tokens:
        if t.text.startswith("Ġ") or not words:
            words.append([t.text.lstrip("Ġ"), [t.logprob]])
        else:
            words[-1][0] += t.text
            words[-1][1].append(t.logprob)
    out = []
    for text, lps in words:
        if prev == "/":
            out.append((text, float(np.mean(np.exp(-np.array(lps))))))
        prev = text
    labels = re.findall(r"/\s*([^\s()]+)", penman)
    assert [t for t, _ in out] == labels
    return out


def oracle_selection(values, alpha=0.3):
    h = np.asarray(values)
    n = len(h)
    s = h.std(ddof=1)
    if n < 2 or s == 0:
        return [True] * n
    t = (h - h.mean()) / (s / math.sqrt(n))
    p = 2 * sps.t.sf(np.abs(t), n - 1)
    return list((p < alpha) & (t > 0))


@pytest.fixture(scope="module")
def instances():
    return [filter_hasanswer(x) for _, x in read_corpus(SYNTHETIC)]


def test_entropies_and_selection_match_oracle(instances):
    checked = 0
    for inst in instances:
        for doc in inst.documents:
            scores = score_document(doc, PipelineConfig())
            expected = []
            for sg in doc.graphs:
                expected += oracle_concept_entropies(sg.penman, sg.tokens)
            assert [e.concept_label for e in scores.entropies] == [l for l, _ in expected]
            got = [e.entropy for e in scores.entropies]
            assert got == pytest.approx([h for _, h in expected], rel=1e-12)
            assert [r.selected for r in scores.results] == oracle_selection(got)
            checked += len(got)
    assert checked > 300


def test_compress_instance_contract(instances):
    taus = []
    for inst in instances:
        rec = compress_instance(inst)
        for doc, cd in zip(inst.documents, rec.documents):
            assert 0 < len(cd.text.split()) <= len(doc.text.split())
        assert rec.context.count("\n") == inst.k - 1
        taus.append(rec.tau)
    assert 0.35 <= np.mean(taus) <= 0.65


def test_lower_alpha_compresses_more(instances):
    loose = np.mean([compress_instance(i).tau for i in instances])
    tight = np.mean([compress_instance(i, PipelineConfig(alpha=0.01)).tau for i in instances])
    assert tight < loose


def test_config_validation():
    for bad in ({"alpha": 0}, {"alpha": 1.5}, {"selection_mode": "x"}, {"k_max": 0},
                {"keep_fraction": 0}, {"interval_long": (6, 5)}, {"workers": 0}, {"ddof": 2},
                {"boundary_prefix": ""}, {"match_policy": "fuzzy"}):
        with pytest.raises(ValueError):
            PipelineConfig(**bad)
