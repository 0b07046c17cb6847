"""Classification metrics: accuracy, precision, recall, F1 and ACC x PDF.

Binary problems treat class 1 as the positive class. With more than two
classes each metric is computed one-vs-rest per class and averaged without
weights (macro average). A class that is never predicted (never present)
contributes precision (recall) 0.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

__all__ = ["MetricsReport", "confusion", "basic_metrics", "acc_pdf", "report"]


@dataclass(frozen=True)
class MetricsReport:
    accuracy: float
    precision: float
    recall: float
    f1: float
    acc_pdf: float
    subset_size: int
    sfr: float

    def to_dict(self) -> dict:
        return asdict(self)


def confusion(truths, predictions, n_classes: int) -> np.ndarray:
    """Count matrix with rows = true class, columns = predicted class."""
    t = np.asarray(truths, dtype=np.int64)
    p = np.asarray(predictions, dtype=np.int64)
    if t.shape != p.shape or t.ndim != 1:
        raise ValueError(f"length mismatch: {t.shape} truths vs {p.shape} predictions")
    if t.size == 0:
        raise ValueError("empty inputs")
    for name, a in (("truth", t), ("prediction", p)):
        if a.min() < 0 or a.max() >= n_classes:
            raise ValueError(f"{name} class id outside 0..{n_classes - 1}")
    cm = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(cm, (t, p), 1)
    return cm


def _ratio(num, den):
    return np.divide(num, den, out=np.zeros_like(num, dtype=float), where=den > 0)


def basic_metrics(cm) -> tuple:
    """(accuracy, precision, recall, f1) of a confusion matrix."""
    cm = np.asarray(cm)
    total = cm.sum()
    if cm.ndim != 2 or cm.shape[0] != cm.shape[1] or total <= 0:
        raise ValueError("confusion matrix must be square with a positive total")
    accuracy = float(np.trace(cm) / total)
    tp = np.diag(cm).astype(float)
    fp = cm.sum(axis=0) - tp
    fn = cm.sum(axis=1) - tp
    precision = _ratio(tp, tp + fp)
    recall = _ratio(tp, tp + fn)
    f1 = _ratio(2 * tp, 2 * tp + fp + fn)
    if cm.shape[0] == 2:
        return accuracy, float(precision[1]), float(recall[1]), float(f1[1])
    return accuracy, float(precision.mean()), float(recall.mean()), float(f1.mean())


def acc_pdf(accuracy: float, subset_size: int, n: int) -> float:
    """Accuracy times the fraction of discarded features."""
    if not 1 <= subset_size <= n:
        raise ValueError(f"subset_size must lie in [1, {n}], got {subset_size}")
    return accuracy * (n - subset_size) / n


def report(truths, predictions, n_classes: int, subset_size: int, n: int) -> MetricsReport:
    acc, prec, rec, f1 = basic_metrics(confusion(truths, predictions, n_classes))
    return MetricsReport(acc, prec, rec, f1, acc_pdf(acc, subset_size, n),
                         int(subset_size), subset_size / n)
