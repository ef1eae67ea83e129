"""Confusion-matrix construction and classification-report arithmetic.

All functions are pure and operate on immutable inputs. Values are kept in
full double precision; rounding happens only at presentation time (see
``fuseval.render``).

Conventions (fixed, exercised by tests):

* ``decide`` maps a score equal to the threshold to class 1 (the threshold
  rule is total: ``score < t -> 0``, ``score >= t -> 1``);
* precision/recall with a zero denominator are defined as 0, and F1 is 0
  whenever precision + recall is 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .errors import AlignmentError
from .predictions import LabelSet


@dataclass(frozen=True)
class ConfusionMatrix:
    """2x2 counts indexed ``counts[true_class][predicted_class]``."""

    counts: tuple[tuple[int, int], tuple[int, int]]

    def __post_init__(self):
        cells = [c for row in self.counts for c in row]
        if len(self.counts) != 2 or any(len(row) != 2 for row in self.counts):
            raise ValueError("confusion matrix must be 2x2")
        if any(not isinstance(c, int) or isinstance(c, bool) or c < 0 for c in cells):
            raise ValueError(f"confusion matrix cells must be non-negative integers: {self.counts}")
        if sum(cells) < 1:
            raise ValueError("confusion matrix must count at least one sample")

    @property
    def total(self) -> int:
        return sum(c for row in self.counts for c in row)

    @property
    def support0(self) -> int:
        return self.counts[0][0] + self.counts[0][1]

    @property
    def support1(self) -> int:
        return self.counts[1][0] + self.counts[1][1]

    @property
    def false_positives(self) -> int:
        """Class-0 (benign) samples predicted as class 1."""
        return self.counts[0][1]

    @property
    def false_negatives(self) -> int:
        """Class-1 (malignant) samples predicted as class 0."""
        return self.counts[1][0]


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class ClassificationReport:
    class0: ClassMetrics
    class1: ClassMetrics
    macro_avg: ClassMetrics
    weighted_avg: ClassMetrics
    accuracy: float


def decide(score: float, threshold: float = 0.5) -> int:
    """Threshold a probability into a class label (ties go to class 1)."""
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold must be in (0, 1), got {threshold}")
    if not 0.0 <= score <= 1.0:
        raise ValueError(f"score must be in [0, 1], got {score}")
    return 1 if score >= threshold else 0


def _check_coverage(labels: LabelSet, decisions: Mapping[str, int]) -> None:
    if decisions.keys() != labels.entries.keys():
        missing = sorted(labels.entries.keys() - decisions.keys())[:10]
        extra = sorted(decisions.keys() - labels.entries.keys())[:10]
        parts = []
        if missing:
            parts.append(f"missing decisions for: {', '.join(missing)}")
        if extra:
            parts.append(f"decisions for unlabeled samples: {', '.join(extra)}")
        raise AlignmentError("decision coverage mismatch; " + "; ".join(parts))


def confusion(labels: LabelSet, decisions: Mapping[str, int]) -> ConfusionMatrix:
    """Count (true class, predicted class) pairs over exactly the labeled set."""
    _check_coverage(labels, decisions)
    cells = [[0, 0], [0, 0]]
    for sid, truth in labels.entries.items():
        predicted = decisions[sid]
        if predicted not in (0, 1):
            raise ValueError(f"decision for sample {sid!r} must be 0 or 1, got {predicted!r}")
        cells[truth][predicted] += 1
    return ConfusionMatrix(counts=((cells[0][0], cells[0][1]), (cells[1][0], cells[1][1])))


def _ratio(numerator: int, denominator: int) -> float:
    return numerator / denominator if denominator else 0.0


def _f1(precision: float, recall: float) -> float:
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def report(cm: ConfusionMatrix) -> ClassificationReport:
    """Full per-class and aggregate metrics for a 2x2 confusion matrix."""
    (c00, c01), (c10, c11) = cm.counts
    support0, support1, total = cm.support0, cm.support1, cm.total

    prec0 = _ratio(c00, c00 + c10)
    rec0 = _ratio(c00, support0)
    prec1 = _ratio(c11, c01 + c11)
    rec1 = _ratio(c11, support1)

    class0 = ClassMetrics(prec0, rec0, _f1(prec0, rec0), support0)
    class1 = ClassMetrics(prec1, rec1, _f1(prec1, rec1), support1)
    macro = ClassMetrics(
        (class0.precision + class1.precision) / 2.0,
        (class0.recall + class1.recall) / 2.0,
        (class0.f1 + class1.f1) / 2.0,
        total,
    )
    weighted = ClassMetrics(
        (support0 * class0.precision + support1 * class1.precision) / total,
        (support0 * class0.recall + support1 * class1.recall) / total,
        (support0 * class0.f1 + support1 * class1.f1) / total,
        total,
    )
    return ClassificationReport(
        class0=class0,
        class1=class1,
        macro_avg=macro,
        weighted_avg=weighted,
        accuracy=(c00 + c11) / total,
    )


def accuracy(labels: LabelSet, decisions: Mapping[str, int]) -> float:
    """Fraction of correct decisions, computed directly (not via a matrix)."""
    _check_coverage(labels, decisions)
    correct = sum(1 for sid, truth in labels.entries.items() if decisions[sid] == truth)
    return correct / labels.total
