"""Command-line front end.

    amrdistill compress CORPUS OUT      compressed contexts, one record per query
    amrdistill score CORPUS OUT         per-concept entropy / t / p / verdict rows
    amrdistill tfidf CORPUS OUT         TF-IDF baseline contexts
    amrdistill eval GOLD PREDICTIONS    accuracy per K, AUC, sigma, deltas vs Vanilla
    amrdistill verify-tables [DIR]      replay the published metric tables

Settings come from flags, then ``AMRD_*`` environment variables, then a
JSON file given with ``--config``, then defaults. Exit status is 0 on
success, 1 on schema or I/O errors, 2 when table verification finds a
mismatch.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, fields
from itertools import islice
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .corpus import QaInstance, SCHEMA_VERSION, SchemaError, filter_hasanswer, read_corpus, read_predictions
from .evaluation import (AccuracyTable, MissingBucket, UnresolvedQuery, accuracy_by_k, auc_report,
                         build_prompt, compression_ratio, delta_rows)
from .penman import PenmanError
from .pipeline import PipelineConfig, compress_instance, score_document
from .tables import verify_tables
from .tfidf import build_idf, compress_tfidf

logger = logging.getLogger("amrdistill")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_MISMATCH = 2

ENV_PREFIX = "AMRD_"

# option name -> (PipelineConfig field, parser)
_SETTINGS = {
    "alpha": ("alpha", float),
    "mode": ("selection_mode", str),
    "boundary_prefix": ("boundary_prefix", str),
    "match_policy": ("match_policy", str),
    "k_max": ("k_max", int),
    "keep_fraction": ("keep_fraction", float),
    "ddof": ("ddof", int),
    "workers": ("workers", int),
}


def resolve_config(args: argparse.Namespace, environ: Optional[Dict[str, str]] = None
                   ) -> PipelineConfig:
    environ = os.environ if environ is None else environ
    values: Dict[str, object] = {}
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as fh:
            raw = json.load(fh)
        known = {f.name for f in fields(PipelineConfig)}
        for key, value in raw.items():
            key = _SETTINGS.get(key, (key,))[0]
            if key not in known:
                raise ValueError(f"unknown config key {key!r}")
            values[key] = tuple(value) if isinstance(value, list) else value
    for option, (name, cast) in _SETTINGS.items():
        env = environ.get(ENV_PREFIX + option.upper())
        if env is not None:
            values[name] = cast(env)
    for option, (name, _) in _SETTINGS.items():
        flag = getattr(args, option, None)
        if flag is not None:
            values[name] = flag
    return PipelineConfig(**values)


# -- record processing ------------------------------------------------------------

def _batched(items: Iterable, size: int) -> Iterator[list]:
    it = iter(items)
    while True:
        batch = list(islice(it, size))
        if not batch:
            return
        yield batch


def _ordered_map(fn, items: Iterable, workers: int) -> Iterator:
    """``map`` that keeps input order, using a bounded process pool when ``workers > 1``."""
    if workers <= 1:
        yield from map(fn, items)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for batch in _batched(items, workers * 8):
            yield from pool.map(fn, batch)


class _Counters:
    def __init__(self):
        self.read = 0
        self.written = 0
        self.schema_errors: List[str] = []
        self.parse_errors = 0
        self.out_of_range_k = 0
        self.taus: List[float] = []

    def summary(self) -> dict:
        out = {
            "records": self.read,
            "written": self.written,
            "skipped_schema": len(self.schema_errors),
            "skipped_parse": self.parse_errors,
            "skipped_k": self.out_of_range_k,
        }
        if self.taus:
            out["mean_tau"] = sum(self.taus) / len(self.taus)
        return out


def _admissible(path: str, config: PipelineConfig, counters: _Counters
                ) -> Iterator[Tuple[int, QaInstance]]:
    for lineno, item in read_corpus(path):
        counters.read += 1
        if isinstance(item, SchemaError):
            logger.error("%s: %s", path, item)
            counters.schema_errors.append(str(item))
            continue
        inst = filter_hasanswer(item)
        if not 1 <= inst.k <= config.k_max:
            logger.info("line %d: query %s has K=%d, skipped", lineno, inst.query_id, inst.k)
            counters.out_of_range_k += 1
            continue
        yield lineno, inst


def _compress_task(job):
    lineno, inst, config = job
    try:
        return lineno, compress_instance(inst, config).to_json(), None
    except (PenmanError, ValueError) as exc:
        return lineno, None, f"{type(exc).__name__}: {exc}"


def _score_task(job):
    lineno, inst, config = job
    rows = []
    try:
        for i, doc in enumerate(inst.documents):
            s = score_document(doc, config)
            for e, r in zip(s.entropies, s.results):
                rows.append({
                    "query_id": inst.query_id,
                    "document_index": i,
                    "sentence_index": e.sentence_index,
                    "variable": e.variable,
                    "label": e.concept_label,
                    "entropy": e.entropy,
                    "subword_count": e.subword_count,
                    "t_stat": r.t_stat,
                    "p_value": r.p_value,
                    "selected": r.selected,
                    "degenerate": r.degenerate,
                })
    except (PenmanError, ValueError) as exc:
        return lineno, None, f"{type(exc).__name__}: {exc}"
    return lineno, rows, None


def _run_records(task, args, config: PipelineConfig, emit) -> int:
    counters = _Counters()
    jobs = ((lineno, inst, config) for lineno, inst in _admissible(args.input, config, counters))
    with open(args.output, "w", encoding="utf-8") as out:
        for lineno, payload, error in _ordered_map(task, jobs, config.workers):
            if error is not None:
                logger.warning("line %d skipped: %s", lineno, error)
                counters.parse_errors += 1
                continue
            emit(out, payload, counters)
    print(json.dumps(counters.summary()), file=sys.stderr)
    if counters.schema_errors:
        for message in counters.schema_errors:
            print(f"schema error: {message}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


def _write_line(out, obj) -> None:
    out.write(json.dumps(obj, ensure_ascii=False, sort_keys=True) + "\n")


def cmd_compress(args, config: PipelineConfig) -> int:
    def emit(out, record, counters):
        _write_line(out, record)
        counters.written += 1
        counters.taus.append(record["tau"])
    return _run_records(_compress_task, args, config, emit)


def cmd_score(args, config: PipelineConfig) -> int:
    def emit(out, rows, counters):
        for row in rows:
            _write_line(out, row)
        counters.written += 1
    return _run_records(_score_task, args, config, emit)


def cmd_tfidf(args, config: PipelineConfig) -> int:
    counters = _Counters()
    instances = list(_admissible(args.input, config, counters))
    corpus = [d.text for _, inst in instances for d in inst.documents if d.text.split()]
    with open(args.output, "w", encoding="utf-8") as out:
        if corpus:
            idf = build_idf(corpus)
            for _, inst in instances:
                docs = []
                for i, d in enumerate(inst.documents):
                    text = compress_tfidf(d.text, idf, config.keep_fraction) if d.text.split() else ""
                    tau = compression_ratio(d.text, text) if d.text.split() else 0.0
                    docs.append({"index": i, "text": text, "tau": tau})
                context = "\n".join(d["text"] for d in docs)
                original = "\n".join(d.text for d in inst.documents)
                tau = compression_ratio(original, context) if original.split() else 0.0
                _write_line(out, {
                    "schema_version": SCHEMA_VERSION,
                    "query_id": inst.query_id,
                    "k": inst.k,
                    "context": context,
                    "tau": tau,
                    "prompt": build_prompt(context, inst.query),
                    "documents": docs,
                })
                counters.written += 1
                counters.taus.append(tau)
    print(json.dumps(counters.summary()), file=sys.stderr)
    return EXIT_ERROR if counters.schema_errors else EXIT_OK


# -- evaluation -------------------------------------------------------------------

def _fmt(x: Optional[float]) -> str:
    return "-" if x is None else f"{x:.2f}"


def evaluate(gold: Sequence[QaInstance], preds, config: PipelineConfig) -> dict:
    """Accuracy tables, per-method AUC reports and deltas against ``Vanilla``.

    Raises :class:`MissingBucket` when an AUC interval reaches a K the
    data does not cover.
    """
    tables = accuracy_by_k(preds, gold, config.match_policy, config.k_max)
    by_method: Dict[str, List[AccuracyTable]] = {}
    for (_, method), table in tables.items():
        by_method.setdefault(method, []).append(table)

    notices: List[str] = []
    reports = {}
    for method, method_tables in by_method.items():
        try:
            reports[method] = auc_report(method_tables, config.interval_standard, config.interval_long)
        except MissingBucket as exc:
            raise MissingBucket(exc.k, f"AUC interval, method {method}") from None
        if reports[method].sigma_s is None:
            notices.append(f"{method}: sigma omitted, only one model")

    vanilla = next((m for m in by_method if m.lower() == "vanilla"), None)
    deltas = {}
    acc_deltas = {}
    if vanilla is not None:
        for method in by_method:
            if method == vanilla:
                continue
            for table in by_method[method]:
                base = tables.get((table.model_id, vanilla))
                if base is not None and base.acc_by_k.keys() == table.acc_by_k.keys():
                    acc_deltas[(table.model_id, method)] = delta_rows(table, base)
            if method in reports and vanilla in reports:
                ours, van = reports[method], reports[vanilla]
                if ours.per_model.keys() == van.per_model.keys():
                    deltas[method] = delta_rows(ours, van)

    return {
        "accuracy": [
            {"model_id": t.model_id, "method_id": t.method_id,
             "acc_by_k": {str(k): v for k, v in t.acc_by_k.items()},
             "counts": {str(k): v for k, v in t.counts.items()}}
            for t in tables.values()
        ],
        "accuracy_delta": [
            {"model_id": m, "method_id": meth,
             "delta_by_k": {str(k): v for k, v in t.acc_by_k.items()}}
            for (m, meth), t in acc_deltas.items()
        ],
        "auc": {m: _report_json(r) for m, r in reports.items()},
        "auc_delta_vs_vanilla": {m: _report_json(r) for m, r in deltas.items()},
        "notices": notices,
    }


def _report_json(r) -> dict:
    return {
        "per_model": {m: {"I_s": v[0], "I_l": v[1]} for m, v in r.per_model.items()},
        "mean_I_s": r.auc_standard,
        "mean_I_l": r.auc_long,
        "sigma_I_s": r.sigma_s,
        "sigma_I_l": r.sigma_l,
    }


def render_report(report: dict) -> str:
    lines = []
    ks = sorted({int(k) for row in report["accuracy"] for k in row["acc_by_k"]})
    lines.append("Accuracy (%) by K")
    lines.append("\t".join(["model", "method"] + [str(k) for k in ks]))
    for row in report["accuracy"]:
        lines.append("\t".join([row["model_id"], row["method_id"]]
                               + [_fmt(row["acc_by_k"].get(str(k))) for k in ks]))
    for title, block in (("AUC", report["auc"]), ("AUC delta vs Vanilla", report["auc_delta_vs_vanilla"])):
        if not block:
            continue
        lines.append("")
        lines.append(title)
        lines.append("method\tmodel\tI_s\tI_l")
        for method, r in block.items():
            for model, v in r["per_model"].items():
                lines.append(f"{method}\t{model}\t{_fmt(v['I_s'])}\t{_fmt(v['I_l'])}")
            lines.append(f"{method}\tsigma\t{_fmt(r['sigma_I_s'])}\t{_fmt(r['sigma_I_l'])}")
    for notice in report["notices"]:
        lines.append(f"note: {notice}")
    return "\n".join(lines)


def cmd_eval(args, config: PipelineConfig) -> int:
    gold, errors = [], []
    for _, item in read_corpus(args.gold):
        (errors if isinstance(item, SchemaError) else gold).append(item)
    preds, pred_errors = read_predictions(args.predictions)
    errors.extend(pred_errors)
    if errors:
        for e in errors:
            print(f"schema error: {e}", file=sys.stderr)
        return EXIT_ERROR
    try:
        report = evaluate(gold, preds, config)
    except UnresolvedQuery as exc:
        print(f"error: prediction refers to unknown query {exc.query_id!r}", file=sys.stderr)
        return EXIT_ERROR
    except MissingBucket as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    print(render_report(report))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
    return EXIT_OK


def cmd_verify_tables(args, config: PipelineConfig) -> int:
    checks = verify_tables(args.fixture_dir, args.tolerance)
    if not checks:
        print("no fixtures found", file=sys.stderr)
        return EXIT_ERROR
    failures = [c for c in checks if not c.ok]
    for c in failures:
        print(f"MISMATCH {c.describe()}")
    print(f"{len(checks) - len(failures)}/{len(checks)} cells within ±{args.tolerance}")
    return EXIT_MISMATCH if failures else EXIT_OK


# -- argument parsing -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="amrdistill", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="count", default=0)
    parser.add_argument("--config", help="JSON file with default settings")
    parser.add_argument("--alpha", type=float, help="significance threshold (default 0.3)")
    parser.add_argument("--mode", choices=["high-only", "two-sided"],
                        help="keep only above-mean concepts, or both tails (default high-only)")
    parser.add_argument("--boundary-prefix", help="word-boundary marker in parser tokens (default Ġ)")
    parser.add_argument("--match-policy", choices=["substring", "strict"])
    parser.add_argument("--k-max", type=int, help="largest K kept after filtering (default 10)")
    parser.add_argument("--keep-fraction", type=float, help="TF-IDF retention fraction (default 0.5)")
    parser.add_argument("--ddof", type=int, choices=[0, 1],
                        help="standard deviation denominator n - ddof (default 1)")
    parser.add_argument("--workers", type=int, help="worker processes (default 1)")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, func, help_ in (("compress", cmd_compress, "compress contexts"),
                              ("score", cmd_score, "dump per-concept scores"),
                              ("tfidf", cmd_tfidf, "TF-IDF baseline")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("input")
        p.add_argument("output")
        p.set_defaults(func=func)

    p = sub.add_parser("eval", help="accuracy / AUC / sigma report")
    p.add_argument("gold")
    p.add_argument("predictions")
    p.add_argument("-o", "--output", help="write the machine-readable report here")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("verify-tables", help="replay published tables from accuracy grids")
    p.add_argument("fixture_dir", nargs="?")
    p.add_argument("--tolerance", type=float, default=0.02)
    p.set_defaults(func=cmd_verify_tables)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = resolve_config(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    try:
        return args.func(args, config)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
