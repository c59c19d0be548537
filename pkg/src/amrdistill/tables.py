"""Replaying published accuracy grids into AUC, sigma and delta tables.

Fixture layout, per dataset ``<ds>`` (tab-separated, one header line):

``<ds>_acc.tsv``
    ``model  method  1 .. 10`` -- accuracy (%) per K.
``<ds>_acc_delta.tsv``
    ``model  1 .. 10`` -- expected ``Ours - Vanilla`` per K.
``<ds>_auc.tsv``
    ``method  interval  <models...>  sigma`` -- expected AUCs; the
    ``Delta`` method row holds ``Ours - Vanilla``.
``<ds>_ablation.tsv``
    ``alpha  row  <models...>`` -- rows ``I_s``, ``I_l``, ``delta_I_s``,
    ``delta_I_l``; alpha ``0.3`` is the default-threshold run.
"""

from __future__ import annotations

import csv
import statistics
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .evaluation import LONG_INTERVAL, STANDARD_INTERVAL, auc

TOLERANCE = 0.02
INTERVALS = {"I_s": STANDARD_INTERVAL, "I_l": LONG_INTERVAL}
DEFAULT_ALPHA = "0.3"
OURS = "Ours"
VANILLA = "Vanilla"
DELTA = "Delta"

MODEL_NAMES = {
    "G-1.3": "GPT-Neo-1.3B",
    "G-2.7": "GPT-Neo-2.7B",
    "O-1.3": "OPT-1.3b",
    "O-2.7": "OPT-2.7b",
    "b-560": "Bloom-560m",
    "b-7b1": "Bloom-7b1",
    "L-13": "Llama-2-chat-13b",
    "L3.1-8": "Llama-3.1-8B-Instruct",
    "DS-V2": "DeepSeek-V2-Lite",
    "Q3-32": "Qwen3-32B",
}


def default_fixture_dir() -> Path:
    return Path(str(resources.files("amrdistill") / "data" / "tables"))


def _rows(path: Path) -> Tuple[List[str], List[List[str]]]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader((line for line in fh if not line.startswith("#")), delimiter="\t")
        header = next(reader)
        return header, [row for row in reader if row]


AccGrid = Dict[Tuple[str, str], Dict[int, float]]


def load_acc_grid(path) -> AccGrid:
    header, rows = _rows(Path(path))
    ks = [int(k) for k in header[2:]]
    return {(r[0], r[1]): dict(zip(ks, map(float, r[2:]))) for r in rows}


def load_acc_delta(path) -> Dict[str, Dict[int, float]]:
    header, rows = _rows(Path(path))
    ks = [int(k) for k in header[1:]]
    return {r[0]: dict(zip(ks, map(float, r[1:]))) for r in rows}


@dataclass(frozen=True)
class AucRow:
    values: Dict[str, float]
    sigma: Optional[float]


def load_auc_table(path) -> Dict[Tuple[str, str], AucRow]:
    header, rows = _rows(Path(path))
    models = header[2:-1] if header[-1] == "sigma" else header[2:]
    out = {}
    for r in rows:
        vals = list(map(float, r[2:]))
        sigma = vals[len(models)] if len(vals) > len(models) else None
        out[(r[0], r[1])] = AucRow(dict(zip(models, vals[: len(models)])), sigma)
    return out


def load_ablation(path) -> Dict[Tuple[str, str], Dict[str, float]]:
    header, rows = _rows(Path(path))
    models = header[2:]
    return {(r[0], r[1]): dict(zip(models, map(float, r[2:]))) for r in rows}


def models_of(grid: AccGrid) -> List[str]:
    seen: Dict[str, None] = {}
    for model, _ in grid:
        seen.setdefault(model)
    return list(seen)


def recompute_aucs(grid: AccGrid, method: str, interval: Tuple[int, int]) -> Dict[str, float]:
    return {model: auc(grid[(model, method)], interval) for model in models_of(grid)
            if (model, method) in grid}


def ablation_method(alpha: str) -> str:
    return OURS if alpha == DEFAULT_ALPHA else f"alpha={alpha}"


def ablation_deltas(grid: AccGrid, alpha: str, interval: Tuple[int, int] = STANDARD_INTERVAL
                    ) -> Dict[str, float]:
    """Per-model AUC of the ``alpha`` run minus that of the default run."""
    ours = recompute_aucs(grid, OURS, interval)
    other = recompute_aucs(grid, ablation_method(alpha), interval)
    return {m: other[m] - ours[m] for m in ours}


@dataclass(frozen=True)
class CellCheck:
    dataset: str
    kind: str        # "auc", "sigma", "delta", "acc_delta", "ablation"
    row: str
    column: str
    expected: float
    actual: float
    tolerance: float = TOLERANCE

    @property
    def ok(self) -> bool:
        return abs(self.actual - self.expected) <= self.tolerance

    def describe(self) -> str:
        return (f"{self.dataset} {self.kind} [{self.row}] {self.column}: "
                f"expected {self.expected:.2f}, got {self.actual:.4f}")


def check_dataset(fixture_dir, dataset: str, tolerance: float = TOLERANCE) -> List[CellCheck]:
    """Recompute every published cell of ``dataset`` from its accuracy grid."""
    base = Path(fixture_dir)
    grid = load_acc_grid(base / f"{dataset}_acc.tsv")
    checks: List[CellCheck] = []

    def add(kind, row, col, expected, actual):
        checks.append(CellCheck(dataset, kind, row, col, expected, actual, tolerance))

    auc_path = base / f"{dataset}_auc.tsv"
    if auc_path.exists():
        table = load_auc_table(auc_path)
        recomputed = {}
        for (method, iv), row in table.items():
            if method == DELTA:
                continue
            got = recompute_aucs(grid, method, INTERVALS[iv])
            recomputed[(method, iv)] = got
            for model, expected in row.values.items():
                add("auc", f"{method} {iv}", model, expected, got[model])
            if row.sigma is not None:
                add("sigma", f"{method} {iv}", "sigma", row.sigma,
                    statistics.stdev(got[m] for m in row.values))
        for iv in INTERVALS:
            row = table.get((DELTA, iv))
            if row is None:
                continue
            deltas = {m: recomputed[(OURS, iv)][m] - recomputed[(VANILLA, iv)][m]
                      for m in row.values}
            for model, expected in row.values.items():
                add("delta", f"{DELTA} {iv}", model, expected, deltas[model])
            if row.sigma is not None:
                add("sigma", f"{DELTA} {iv}", "sigma", row.sigma, statistics.stdev(deltas.values()))

    delta_path = base / f"{dataset}_acc_delta.tsv"
    if delta_path.exists():
        for model, by_k in load_acc_delta(delta_path).items():
            for k, expected in by_k.items():
                actual = grid[(model, OURS)][k] - grid[(model, VANILLA)][k]
                add("acc_delta", f"{model}", f"K={k}", expected, actual)

    abl_path = base / f"{dataset}_ablation.tsv"
    if abl_path.exists():
        for (alpha, row), values in load_ablation(abl_path).items():
            if row in INTERVALS:
                got = recompute_aucs(grid, ablation_method(alpha), INTERVALS[row])
            else:
                got = ablation_deltas(grid, alpha, INTERVALS[row.replace("delta_", "")])
            for model, expected in values.items():
                add("ablation", f"alpha={alpha} {row}", model, expected, got[model])
    return checks


def datasets_in(fixture_dir) -> List[str]:
    return sorted(p.name[: -len("_acc.tsv")] for p in Path(fixture_dir).glob("*_acc.tsv"))


def verify_tables(fixture_dir=None, tolerance: float = TOLERANCE) -> List[CellCheck]:
    fixture_dir = default_fixture_dir() if fixture_dir is None else Path(fixture_dir)
    checks = []
    for dataset in datasets_in(fixture_dir):
        checks.extend(check_dataset(fixture_dir, dataset, tolerance))
    return checks

