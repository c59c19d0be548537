"""Acceptance criteria 1-9, one PASS/FAIL line each.

Run alone with ``pytest tests/test_acceptance.py -v``; the verdict lines
are repeated in the terminal summary.
"""

import math
import random
import statistics
import time

import pytest
from scipy import integrate

from amrdistill import cli
from amrdistill.entropy import ConceptEntropy
from amrdistill.penman import AmrGraph, ConceptNode, Constant, Relation, parse_penman, serialize_penman
from amrdistill.stats import select_significant, student_t_cdf
from amrdistill.tables import (INTERVALS, OURS, VANILLA, ablation_deltas, check_dataset,
                               default_fixture_dir, load_acc_grid, recompute_aucs)

from conftest import SYNTHETIC, read_jsonl

TOL = 0.02
FIXTURES = default_fixture_dir()
VERDICTS = []


def verdict(criterion, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}"
    VERDICTS.append(line)
    print(line)
    assert ok, line


def _failures(checks):
    return [c.describe() for c in checks if not c.ok]


# 1 ---------------------------------------------------------------------------------

def test_criterion_1_auc_replay():
    start = time.perf_counter()
    grid = load_acc_grid(FIXTURES / "popqa_acc.tsv")
    checks = [c for c in check_dataset(FIXTURES, "popqa") if c.kind == "auc"]
    van_s = recompute_aucs(grid, VANILLA, INTERVALS["I_s"])["G-1.3"]
    van_l = recompute_aucs(grid, VANILLA, INTERVALS["I_l"])["G-1.3"]
    ours_l = recompute_aucs(grid, OURS, INTERVALS["I_l"])["Q3-32"]
    elapsed = time.perf_counter() - start
    anchors = (abs(van_s - 553.32) <= TOL and abs(van_l - 262.07) <= TOL
               and abs(ours_l - 191.09) <= TOL)
    bad = _failures(checks)
    verdict(1, len(checks) == 140 and not bad and anchors and elapsed < 1.0,
            f"{len(checks) - len(bad)}/{len(checks)} PopQA AUC cells within ±{TOL}; "
            f"anchors {van_s:.2f}/{van_l:.2f}/{ours_l:.2f}; {elapsed * 1000:.0f} ms {bad}")


# 2 ---------------------------------------------------------------------------------

@pytest.mark.parametrize("dataset", ["popqa", "entityquestions"])
def test_criterion_2_sigma_replay(dataset):
    checks = [c for c in check_dataset(FIXTURES, dataset) if c.kind == "sigma"]
    bad = _failures(checks)
    extra = ""
    if dataset == "popqa":
        grid = load_acc_grid(FIXTURES / "popqa_acc.tsv")
        sigma = statistics.stdev(recompute_aucs(grid, VANILLA, INTERVALS["I_s"]).values())
        extra = f"; anchor Vanilla I_s sigma {sigma:.2f}"
        bad += [] if abs(sigma - 119.63) <= TOL else [f"anchor {sigma:.4f} != 119.63"]
    verdict(2, bool(checks) and not bad,
            f"{dataset}: {len(checks) - len(bad)}/{len(checks)} sigma cells within ±{TOL}{extra} {bad}")


# 3 ---------------------------------------------------------------------------------

def test_criterion_3_delta_replay():
    checks = [c for c in check_dataset(FIXTURES, "popqa") if c.kind == "delta"]
    grid = load_acc_grid(FIXTURES / "popqa_acc.tsv")
    d = (recompute_aucs(grid, OURS, INTERVALS["I_s"])["G-1.3"]
         - recompute_aucs(grid, VANILLA, INTERVALS["I_s"])["G-1.3"])
    bad = _failures(checks)
    verdict(3, len(checks) == 20 and not bad and abs(d - 47.30) <= TOL,
            f"{len(checks) - len(bad)}/{len(checks)} delta cells within ±{TOL}; "
            f"anchor G-1.3 I_s {d:+.2f} {bad}")


# 4 ---------------------------------------------------------------------------------

def test_criterion_4_ablation_ordering():
    grid = load_acc_grid(FIXTURES / "popqa_acc.tsv")
    worst = -math.inf
    count = 0
    for alpha in ("0.01", "0.05", "0.1", "0.5"):
        for value in ablation_deltas(grid, alpha, INTERVALS["I_s"]).values():
            worst = max(worst, value)
            count += 1
    verdict(4, count == 40 and worst < 0,
            f"{count} PopQA I_s deltas vs alpha = 0.3, largest {worst:+.2f} (all must be < 0)")


# 5 ---------------------------------------------------------------------------------

def test_criterion_5_t_cdf():
    grid = [-10 + 20 * i / 400 for i in range(401)]
    err1 = max(abs(student_t_cdf(t, 1) - (0.5 + math.atan(t) / math.pi)) for t in grid)
    err2 = max(abs(student_t_cdf(t, 2) - (0.5 + t / (2 * math.sqrt(2) * math.sqrt(1 + t * t / 2))))
               for t in grid)
    err0 = max(abs(student_t_cdf(0.0, df) - 0.5) for df in range(1, 101))
    z = 1.959963984540054
    norm = 0.5 * (1 + math.erf(z / math.sqrt(2)))
    errn = max(abs(student_t_cdf(s * z, 10 ** 6) - (norm if s > 0 else 1 - norm)) for s in (1, -1))
    verdict(5, err1 <= 1e-10 and err2 <= 1e-10 and err0 <= 1e-12 and errn <= 1e-4,
            f"max error df=1 {err1:.1e}, df=2 {err2:.1e}, F(0) {err0:.1e}, normal limit {errn:.1e}")


# 6 ---------------------------------------------------------------------------------

def _brute_force_verdicts(values, alpha=0.3):
    n = len(values)
    mean = sum(values) / n
    s = math.sqrt(sum((v - mean) ** 2 for v in values) / (n - 1))
    df = n - 1
    log_c = math.lgamma((df + 1) / 2) - math.lgamma(df / 2) - 0.5 * math.log(df * math.pi)

    def density(x):
        return math.exp(log_c - (df + 1) / 2 * math.log1p(x * x / df))

    out = []
    for v in values:
        t = (v - mean) / (s / math.sqrt(n))
        tail, _ = integrate.quad(density, abs(t), math.inf, epsabs=1e-13, epsrel=1e-12, limit=200)
        out.append(2 * tail < alpha and t > 0)
    return out


def test_criterion_6_selection_oracle():
    rng = random.Random(6)
    disagreements = 0
    for _ in range(1000):
        n = rng.randint(3, 50)
        values = [rng.lognormvariate(1.0, 0.6) for _ in range(n)]
        ents = [ConceptEntropy(f"c{i}", f"v{i}", h, 1) for i, h in enumerate(values)]
        got = [r.selected for r in select_significant(ents, alpha=0.3)]
        if got != _brute_force_verdicts(values):
            disagreements += 1
    verdict(6, disagreements == 0, f"{1000 - disagreements}/1000 populations agree on every verdict")


# 7 ---------------------------------------------------------------------------------

LABELS = ["want-01", "boy", "go-02", "city", "name", "date-entity", "and", "i", "establish-01",
          "person", "have-org-role-91", "thing"]
SYMBOLS = ["-", "+", "imperative", "expressive", "interrogative"]


def random_graph(rng, max_nodes=12, reentrancy=0.3):
    n = rng.randint(1, max_nodes)
    variables = [f"{rng.choice('abcdefghxyz')}{i}" if i else "r" for i in range(n)]
    nodes = {v: ConceptNode(v, rng.choice(LABELS)) for v in variables}
    relations = []
    for i in range(1, n):
        relations.append(Relation(variables[rng.randrange(i)], f":ARG{rng.randint(0, 4)}", variables[i]))
    for v in variables:
        if rng.random() < reentrancy and n > 1:
            target = rng.choice([u for u in variables if u != v])
            relations.append(Relation(v, rng.choice([":ARG0", ":ARG1", ":mod", ":poss"]), target))
        if rng.random() < 0.3:
            kind = rng.choice(["integer", "string", "symbol"])
            value = {"integer": lambda: rng.randint(-50, 3000),
                     "string": lambda: rng.choice(["New York", "Marie", 'say "hi"', "a\\b"]),
                     "symbol": lambda: rng.choice(SYMBOLS)}[kind]()
            relations.append(Relation(v, rng.choice([":op1", ":year", ":polarity", ":mode"]),
                                      Constant(value, kind)))
    rng.shuffle(relations)
    return AmrGraph("r", nodes, tuple(relations))


def test_criterion_7_penman_round_trip():
    rng = random.Random(7)
    failures = []
    reentrant = 0
    for case in range(10_000):
        g = random_graph(rng)
        text = serialize_penman(g)
        back = parse_penman(text)
        if back != g or serialize_penman(back) != text:
            failures.append(text)
        targets = [r.target for r in g.relations if not r.is_attribute]
        reentrant += len(targets) != len(set(targets))
    verdict(7, not failures and reentrant > 1000,
            f"{10_000 - len(failures)}/10000 random graphs round-trip "
            f"({reentrant} with re-entrancy) {failures[:2]}")


# 8 ---------------------------------------------------------------------------------

def test_criterion_8_length_contract(tmp_path):
    out = tmp_path / "out.jsonl"
    status = cli.main(["compress", str(SYNTHETIC), str(out)])
    records = read_jsonl(out)
    sources = {r["query_id"]: [d["text"] for d in r["documents"] if d["hasanswer"]]
               for r in read_jsonl(SYNTHETIC)}
    over = [(r["query_id"], d["index"]) for r in records for d in r["documents"]
            if len(d["text"].split()) > len(sources[r["query_id"]][d["index"]].split())]
    mean_tau = statistics.fmean(r["tau"] for r in records)
    verdict(8, status == 0 and len(records) == 20 and not over and 0.35 <= mean_tau <= 0.65,
            f"{len(records)} records, {sum(len(r['documents']) for r in records)} documents, "
            f"{len(over)} over length; mean tau {mean_tau:.3f} (band [0.35, 0.65])")


# 9 ---------------------------------------------------------------------------------

def test_criterion_9_determinism(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    start = time.perf_counter()
    sa = cli.main(["compress", str(SYNTHETIC), str(a)])
    sb = cli.main(["compress", str(SYNTHETIC), str(b)])
    elapsed = time.perf_counter() - start
    same = a.read_bytes() == b.read_bytes()
    verdict(9, sa == sb == 0 and same and elapsed < 5.0,
            f"outputs {'byte-identical' if same else 'DIFFER'}; two runs in {elapsed:.2f} s")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
