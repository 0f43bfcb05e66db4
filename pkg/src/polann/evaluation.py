"""Confusion matrices, per-class and macro/micro F1, and Cohen's kappa."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ValidationError
from .polarity import LABELS, SentimentLabel

N_CLASSES = len(LABELS)


@dataclass(frozen=True)
class ConfusionMatrix:
    """4x4 counts; rows are gold labels, columns are predicted labels."""

    counts: np.ndarray

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.shape != (N_CLASSES, N_CLASSES):
            raise ValidationError(f"confusion matrix must be {N_CLASSES}x{N_CLASSES}")
        if np.any(counts < 0):
            raise ValidationError("confusion counts must be non-negative")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())


@dataclass(frozen=True)
class MetricsReport:
    """Per-class precision/recall/F1 plus macro and micro aggregates."""

    precision: tuple[float, ...]
    recall: tuple[float, ...]
    f1: tuple[float, ...]
    support: tuple[int, ...]
    macro_f1: float
    micro_f1: float


def confusion(
    gold: Sequence[SentimentLabel], predicted: Sequence[SentimentLabel]
) -> ConfusionMatrix:
    """Count (gold, predicted) pairs into a 4x4 matrix."""
    if len(gold) != len(predicted):
        raise ValidationError(
            f"gold and predicted lengths differ: {len(gold)} vs {len(predicted)}"
        )
    if not gold:
        raise ValidationError("cannot build a confusion matrix from zero pairs")
    counts = np.zeros((N_CLASSES, N_CLASSES), dtype=np.int64)
    for g, p in zip(gold, predicted):
        counts[int(g), int(p)] += 1
    return ConfusionMatrix(counts=counts)


def _f1(precision: float, recall: float) -> float:
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def metrics(matrix: ConfusionMatrix, only_present: bool = False) -> MetricsReport:
    """Per-class scores with the 0/0 -> 0 convention.

    macro_f1 averages over all four classes by default; with only_present
    the average runs over classes that occur in gold.  micro_f1 reduces to
    accuracy for single-label multiclass data.
    """
    counts = matrix.counts
    if counts.sum() == 0:
        raise ValidationError("empty confusion matrix")
    tp = np.diag(counts).astype(np.float64)
    fp = counts.sum(axis=0) - tp
    fn = counts.sum(axis=1) - tp
    precision = np.where(tp + fp > 0, tp / np.maximum(tp + fp, 1), 0.0)
    recall = np.where(tp + fn > 0, tp / np.maximum(tp + fn, 1), 0.0)
    f1 = np.array([_f1(p, r) for p, r in zip(precision, recall)])
    support = counts.sum(axis=1)
    if only_present:
        present = support > 0
        macro = float(f1[present].mean())
    else:
        macro = float(f1.mean())
    micro = float(tp.sum() / (tp.sum() + (fp.sum() + fn.sum()) / 2.0))
    return MetricsReport(
        precision=tuple(float(p) for p in precision),
        recall=tuple(float(r) for r in recall),
        f1=tuple(float(v) for v in f1),
        support=tuple(int(s) for s in support),
        macro_f1=macro,
        micro_f1=micro,
    )


def grouped_macro(
    gold: Sequence[SentimentLabel],
    predicted: Sequence[SentimentLabel],
    groups: Sequence[str],
) -> tuple[dict[str, float], float]:
    """Macro-F1 per group plus the unweighted mean over groups."""
    if not (len(gold) == len(predicted) == len(groups)):
        raise ValidationError("gold, predicted, and groups must have equal lengths")
    if not groups:
        raise ValidationError("empty group set")
    by_group: dict[str, tuple[list[SentimentLabel], list[SentimentLabel]]] = {}
    for g, p, tag in zip(gold, predicted, groups):
        bucket = by_group.setdefault(tag, ([], []))
        bucket[0].append(g)
        bucket[1].append(p)
    scores = {
        tag: metrics(confusion(pair[0], pair[1])).macro_f1
        for tag, pair in sorted(by_group.items())
    }
    mean = float(np.mean(list(scores.values())))
    return scores, mean


def cohen_kappa(a: Sequence[SentimentLabel], b: Sequence[SentimentLabel]) -> float:
    """Chance-corrected agreement between two labelings.

    kappa = (p_o - p_e) / (1 - p_e) with p_e from the two marginal label
    distributions; the degenerate p_e = 1 case returns 1 when the
    labelings agree everywhere and 0 otherwise.
    """
    if len(a) != len(b):
        raise ValidationError(f"labelings have different lengths: {len(a)} vs {len(b)}")
    if not a:
        raise ValidationError("cannot compute agreement on zero pairs")
    n = len(a)
    observed = sum(1 for x, y in zip(a, b) if x == y) / n
    marginal_a = {label: 0 for label in LABELS}
    marginal_b = {label: 0 for label in LABELS}
    for x in a:
        marginal_a[x] += 1
    for y in b:
        marginal_b[y] += 1
    expected = sum(
        (marginal_a[label] / n) * (marginal_b[label] / n) for label in LABELS
    )
    if expected >= 1.0:
        return 1.0 if observed == 1.0 else 0.0
    return (observed - expected) / (1.0 - expected)
