"""Result tables: CSV persistence and global Pareto extraction."""

from __future__ import annotations

import csv
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable

import numpy as np

from .moo import pareto_filter

RESULTS_HEADER = [
    "genotype",
    "accuracy",
    "classical_flops",
    "quantum_flops",
    "total_flops",
    "is_pareto",
    "generation",
    "seed",
]
GENERATIONS_HEADER = [
    "generation",
    "evaluations",
    "front_size",
    "hypervolume",
    "best_accuracy",
    "flops_at_best",
]


class ResultsError(ValueError):
    pass


@dataclass(frozen=True)
class ResultsRow:
    genotype: str
    accuracy: float
    classical_flops: int
    quantum_flops: int
    total_flops: int
    is_pareto: bool
    generation: int
    seed: int

    def objectives(self) -> tuple[float, int]:
        return (1.0 - self.accuracy, self.total_flops)

    def as_record(self) -> list[str]:
        return [
            self.genotype,
            repr(float(self.accuracy)),
            str(self.classical_flops),
            str(self.quantum_flops),
            str(self.total_flops),
            "1" if self.is_pareto else "0",
            str(self.generation),
            str(self.seed),
        ]


def mark_pareto(rows: list[ResultsRow]) -> list[ResultsRow]:
    """Recompute ``is_pareto`` flags over the whole table."""
    if not rows:
        return []
    front = set(pareto_filter(np.array([r.objectives() for r in rows], dtype=float)))
    return [replace(r, is_pareto=i in front) for i, r in enumerate(rows)]


def pareto_rows(rows: list[ResultsRow]) -> list[ResultsRow]:
    """Globally non-dominated rows, ordered by total FLOPs (stable)."""
    if not rows:
        return []
    idx = pareto_filter(np.array([r.objectives() for r in rows], dtype=float))
    front = [replace(rows[i], is_pareto=True) for i in idx]
    return sorted(front, key=lambda r: r.total_flops)


def write_results(path, rows: Iterable[ResultsRow]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RESULTS_HEADER)
        for r in rows:
            w.writerow(r.as_record())


def read_results(path) -> list[ResultsRow]:
    path = Path(path)
    if not path.is_file():
        raise ResultsError(f"results file not found: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != RESULTS_HEADER:
            raise ResultsError(f"{path}: row 1: expected header {','.join(RESULTS_HEADER)}")
        rows = []
        for lineno, rec in enumerate(reader, start=2):
            if not rec:
                continue
            if len(rec) != len(RESULTS_HEADER):
                raise ResultsError(f"{path}: row {lineno}: expected {len(RESULTS_HEADER)} fields, got {len(rec)}")
            try:
                row = ResultsRow(
                    genotype=rec[0],
                    accuracy=float(rec[1]),
                    classical_flops=int(rec[2]),
                    quantum_flops=int(rec[3]),
                    total_flops=int(rec[4]),
                    is_pareto=rec[5] == "1",
                    generation=int(rec[6]),
                    seed=int(rec[7]),
                )
            except ValueError as exc:
                raise ResultsError(f"{path}: row {lineno}: {exc}") from None
            if row.total_flops != row.classical_flops + row.quantum_flops:
                raise ResultsError(f"{path}: row {lineno}: total_flops != classical + quantum")
            if not 0.0 <= row.accuracy <= 1.0:
                raise ResultsError(f"{path}: row {lineno}: accuracy outside [0, 1]")
            rows.append(row)
    return rows


class GenerationLog:
    """Per-generation stats streamed to CSV as they arrive."""

    def __init__(self, path):
        self._fh = open(path, "w", newline="", encoding="utf-8")
        self._w = csv.writer(self._fh, lineterminator="\n")
        self._w.writerow(GENERATIONS_HEADER)
        self._fh.flush()

    def __call__(self, stats) -> None:
        self._w.writerow(
            [
                stats.generation,
                stats.evaluations,
                stats.front_size,
                repr(float(stats.hypervolume)),
                repr(float(stats.best_accuracy)),
                repr(float(stats.flops_at_best)),
            ]
        )
        self._fh.flush()

    def close(self) -> None:
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def read_generations(path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        return [
            {k: (int(v) if k in ("generation", "evaluations", "front_size") else float(v)) for k, v in row.items()}
            for row in csv.DictReader(fh)
        ]
