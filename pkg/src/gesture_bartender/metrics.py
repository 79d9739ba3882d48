"""Confusion matrix and per-class precision/recall/F1 reporting."""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Dict, List, Sequence

import numpy as np

from .dataset import GestureLabel

LABELS = list(GestureLabel)  # row/column order: gesture codes 1..8


def round_half_up(value: float, digits: int = 2) -> float:
    """Round for display the way the result tables do (half away from zero)."""
    q = Decimal(1).scaleb(-digits)
    return float(Decimal(repr(float(value))).quantize(q, rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class ConfusionMatrix:
    """8x8 count table; rows are actual classes, columns predicted classes."""

    counts: np.ndarray

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=int)
        n = len(LABELS)
        if counts.shape != (n, n):
            raise ValueError(f"confusion matrix must be {n}x{n}, got {counts.shape}")
        if np.any(counts < 0):
            raise ValueError("confusion matrix entries must be non-negative")
        object.__setattr__(self, "counts", counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def accuracy(self) -> float:
        return float(np.trace(self.counts) / self.total)

    def row_sums(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    def col_sums(self) -> np.ndarray:
        return self.counts.sum(axis=0)

    def to_csv(self, path) -> None:
        names = [label.name for label in LABELS]
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("actual\\predicted," + ",".join(names) + "\n")
            for label, row in zip(LABELS, self.counts):
                fh.write(label.name + "," + ",".join(str(int(v)) for v in row) + "\n")


def confusion_matrix(actual: Sequence[int], predicted: Sequence[int]) -> ConfusionMatrix:
    """Count actual-vs-predicted pairs into the 8x8 class table."""
    actual = np.asarray(actual, dtype=int)
    predicted = np.asarray(predicted, dtype=int)
    if actual.shape != predicted.shape or actual.ndim != 1:
        raise ValueError(
            f"label lists must be 1-d and equal length, got {actual.shape} vs {predicted.shape}"
        )
    if actual.size == 0:
        raise ValueError("label lists are empty")
    counts = np.zeros((len(LABELS), len(LABELS)), dtype=int)
    for a, p in zip(actual, predicted):
        counts[int(a) - 1, int(p) - 1] += 1
    return ConfusionMatrix(counts)


@dataclass(frozen=True)
class ClassificationReport:
    """Per-class precision/recall/F1/support plus support-weighted averages."""

    labels: List[GestureLabel]
    precision: np.ndarray
    recall: np.ndarray
    f1: np.ndarray
    support: np.ndarray

    @property
    def total_support(self) -> int:
        return int(self.support.sum())

    @property
    def weighted_precision(self) -> float:
        return float(np.average(self.precision, weights=self.support))

    @property
    def weighted_recall(self) -> float:
        return float(np.average(self.recall, weights=self.support))

    @property
    def weighted_f1(self) -> float:
        return float(np.average(self.f1, weights=self.support))

    def by_label(self, label: GestureLabel) -> Dict[str, float]:
        i = self.labels.index(label)
        return {
            "precision": float(self.precision[i]),
            "recall": float(self.recall[i]),
            "f1": float(self.f1[i]),
            "support": int(self.support[i]),
        }

    def to_dict(self) -> dict:
        return {
            "classes": {
                label.name: self.by_label(label) for label in self.labels
            },
            "weighted_avg": {
                "precision": self.weighted_precision,
                "recall": self.weighted_recall,
                "f1": self.weighted_f1,
                "support": self.total_support,
            },
        }

    def format_table(self) -> str:
        """Aligned text table: Precision / Recall / F1-score / Support."""
        header = f"{'':<16}{'Precision':>10}{'Recall':>8}{'F1-score':>10}{'Support':>9}"
        lines = [header]
        for i, label in enumerate(self.labels):
            lines.append(
                f"{label.name:<16}"
                f"{round_half_up(self.precision[i]):>10.2f}"
                f"{round_half_up(self.recall[i]):>8.2f}"
                f"{round_half_up(self.f1[i]):>10.2f}"
                f"{int(self.support[i]):>9d}"
            )
        lines.append("")
        lines.append(
            f"{'Average / Total':<16}"
            f"{round_half_up(self.weighted_precision):>10.2f}"
            f"{round_half_up(self.weighted_recall):>8.2f}"
            f"{round_half_up(self.weighted_f1):>10.2f}"
            f"{self.total_support:>9d}"
        )
        return "\n".join(lines)


def classification_report(cm: ConfusionMatrix) -> ClassificationReport:
    """Derive the per-class report from a confusion matrix.

    Precision of a class with an empty predicted column is 0, matching the
    F1 = 0 convention when precision + recall is 0.
    """
    if cm.total == 0:
        raise ValueError("confusion matrix is empty")
    diag = np.diag(cm.counts).astype(float)
    col = cm.col_sums().astype(float)
    row = cm.row_sums().astype(float)
    with np.errstate(divide="ignore", invalid="ignore"):
        precision = np.where(col > 0, diag / np.maximum(col, 1e-300), 0.0)
        recall = np.where(row > 0, diag / np.maximum(row, 1e-300), 0.0)
    pr = precision + recall
    f1 = np.where(pr > 0, 2.0 * precision * recall / np.maximum(pr, 1e-300), 0.0)
    return ClassificationReport(
        labels=list(LABELS),
        precision=precision,
        recall=recall,
        f1=f1,
        support=row.astype(int),
    )
