"""Confusion matrix and derived classification metrics.

Convention: rows are the true class, columns the predicted class. Metric
definitions are one-vs-rest; any zero-denominator case yields 0 rather than
NaN so reports are total.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .dataset import CLASS_NAMES


@dataclass
class ConfusionMatrix:
    counts: np.ndarray  # [K, K] int64, rows = true, cols = predicted
    class_labels: tuple[str, ...]

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def format_table(self) -> str:
        """Human-readable table with class-label headers (rows true, cols predicted)."""
        labels = self.class_labels
        width = max(len(l) for l in labels + ("true \\ pred",)) + 2
        num_w = max(8, len(str(int(self.counts.max()))) + 2)
        lines = [
            "true \\ pred".ljust(width)
            + "".join(l.rjust(max(num_w, len(l) + 2)) for l in labels)
        ]
        for i, l in enumerate(labels):
            lines.append(
                l.ljust(width)
                + "".join(
                    str(int(self.counts[i, j])).rjust(max(num_w, len(labels[j]) + 2))
                    for j in range(len(labels))
                )
            )
        return "\n".join(lines)


@dataclass
class ClassMetrics:
    precision: float
    recall: float  # sensitivity
    specificity: float
    f1: float


@dataclass
class MetricsReport:
    accuracy: float
    per_class: dict[str, ClassMetrics]
    macro_f1: float

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "macro_f1": self.macro_f1,
            "per_class": {
                label: {
                    "precision": m.precision,
                    "recall": m.recall,
                    "sensitivity": m.recall,
                    "specificity": m.specificity,
                    "f1": m.f1,
                }
                for label, m in self.per_class.items()
            },
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def format_table(self) -> str:
        lines = [
            f"accuracy: {self.accuracy:.4f}    macro F1: {self.macro_f1:.4f}",
            f"{'class':<22}{'precision':>10}{'recall':>10}{'specificity':>13}{'f1':>10}",
        ]
        for label, m in self.per_class.items():
            lines.append(
                f"{label:<22}{m.precision:>10.4f}{m.recall:>10.4f}"
                f"{m.specificity:>13.4f}{m.f1:>10.4f}"
            )
        return "\n".join(lines)


def confusion_matrix(
    true_labels,
    predicted_labels,
    num_classes: int | None = None,
    class_labels: tuple[str, ...] | None = None,
) -> ConfusionMatrix:
    """Count matrix counts[t][p] = |{i : true=t, pred=p}|."""
    y_true = np.asarray(true_labels, dtype=np.int64)
    y_pred = np.asarray(predicted_labels, dtype=np.int64)
    if y_true.shape != y_pred.shape or y_true.ndim != 1:
        raise ValueError(
            f"label vectors must be 1-D and equal length, got {y_true.shape} and {y_pred.shape}"
        )
    if class_labels is None:
        class_labels = CLASS_NAMES if num_classes in (None, len(CLASS_NAMES)) else tuple(
            f"class_{i}" for i in range(num_classes)
        )
    k = num_classes if num_classes is not None else len(class_labels)
    if len(class_labels) != k:
        raise ValueError(f"{k} classes but {len(class_labels)} labels")
    for name, arr in (("true", y_true), ("predicted", y_pred)):
        if arr.size and (arr.min() < 0 or arr.max() >= k):
            raise ValueError(f"{name} labels must lie in [0, {k})")
    counts = np.zeros((k, k), dtype=np.int64)
    np.add.at(counts, (y_true, y_pred), 1)
    return ConfusionMatrix(counts=counts, class_labels=tuple(class_labels))


def compute_metrics(cm: ConfusionMatrix) -> MetricsReport:
    """Accuracy, per-class precision/recall/specificity/F1, and macro F1."""
    counts = np.asarray(cm.counts, dtype=np.int64)
    total = counts.sum()
    if total == 0:
        raise ValueError("confusion matrix is empty")

    def ratio(num: float, den: float) -> float:
        return float(num / den) if den > 0 else 0.0

    accuracy = float(np.trace(counts) / total)
    per_class: dict[str, ClassMetrics] = {}
    f1s = []
    for c, label in enumerate(cm.class_labels):
        tp = counts[c, c]
        fp = counts[:, c].sum() - tp
        fn = counts[c, :].sum() - tp
        tn = total - tp - fp - fn
        precision = ratio(tp, tp + fp)
        recall = ratio(tp, tp + fn)
        specificity = ratio(tn, tn + fp)
        f1 = ratio(2 * precision * recall, precision + recall)
        per_class[label] = ClassMetrics(
            precision=precision, recall=recall, specificity=specificity, f1=f1
        )
        f1s.append(f1)
    return MetricsReport(
        accuracy=accuracy, per_class=per_class, macro_f1=float(np.mean(f1s))
    )
