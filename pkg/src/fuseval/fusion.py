"""Score-level fusion of independently trained binary classifiers.

The main strategy is the accuracy-weighted average: each model's probability
output is multiplied by a non-negative weight (in practice its measured
accuracy) and the products are normalized by the weight sum,

    fused = sum(score_i * w_i) / sum(w_i)

so weights never need to be pre-normalized. The unweighted average and
thresholded majority voting are provided as comparison strategies. All
operations are pure per-sample functions and extend to any number of
models M >= 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import FusionError
from .metrics import decide
from .predictions import AlignedPanel, PredictionSet

WEIGHTED_AVERAGE = "weighted_average"
PLAIN_AVERAGE = "plain_average"
MAJORITY_VOTE = "majority_vote"
STRATEGIES = (WEIGHTED_AVERAGE, PLAIN_AVERAGE, MAJORITY_VOTE)


@dataclass(frozen=True)
class WeightVector:
    """Per-model weights aligned with a panel's model order."""

    values: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if not self.values:
            raise FusionError("weight vector must not be empty")
        for v in self.values:
            if not math.isfinite(v) or v < 0.0:
                raise FusionError(f"weights must be finite and non-negative, got {v!r}")
        if math.fsum(self.values) <= 0.0:
            raise FusionError("degenerate weights: at least one weight must be positive")

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class FusionConfig:
    strategy: str
    threshold: float = 0.5
    weights: WeightVector | None = None

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise FusionError(f"unknown strategy {self.strategy!r}; expected one of {STRATEGIES}")
        if not 0.0 < self.threshold < 1.0:
            raise FusionError(f"threshold must be in (0, 1), got {self.threshold}")
        if self.strategy == WEIGHTED_AVERAGE and self.weights is None:
            raise FusionError("strategy 'weighted_average' requires a weight vector")


def _check_scores(scores: Sequence[float]) -> None:
    if not scores:
        raise FusionError("at least one score is required")
    for s in scores:
        if not (math.isfinite(s) and 0.0 <= s <= 1.0):
            raise FusionError(f"scores must lie in [0, 1], got {s!r}")


def fuse_weighted(scores: Sequence[float], weights: WeightVector) -> float:
    """Weight-normalized average of per-model scores.

    The result is clamped into [min(scores), max(scores)]: mathematically a
    convex combination cannot leave that hull, and the clamp keeps floating
    point rounding from spilling a hair outside it.
    """
    _check_scores(scores)
    if len(scores) != len(weights):
        raise FusionError(f"{len(scores)} scores but {len(weights)} weights")
    numerator = math.fsum(s * w for s, w in zip(scores, weights.values))
    fused = numerator / math.fsum(weights.values)
    return min(max(fused, min(scores)), max(scores))


def fuse_plain(scores: Sequence[float]) -> float:
    """Arithmetic mean; identical to fuse_weighted with uniform weights."""
    _check_scores(scores)
    fused = math.fsum(scores) / len(scores)
    return min(max(fused, min(scores)), max(scores))


def fuse_majority(scores: Sequence[float], threshold: float = 0.5) -> int:
    """Majority vote over thresholded decisions.

    A tie (possible for even M) falls back to the thresholded plain average,
    which keeps the rule total and consistent with the averaging family.
    """
    _check_scores(scores)
    votes = sum(decide(s, threshold) for s in scores)
    if 2 * votes > len(scores):
        return 1
    if 2 * votes < len(scores):
        return 0
    return decide(fuse_plain(scores), threshold)


def weights_from_accuracy(panel: AlignedPanel, threshold: float = 0.5) -> WeightVector:
    """Measure each model's accuracy on the panel and use it as its weight."""
    labels = panel.labels
    accuracies = []
    for model in panel.models:
        correct = sum(
            1
            for sid, truth in labels.entries.items()
            if decide(model.scores[sid], threshold) == truth
        )
        accuracies.append(correct / labels.total)
    if all(a == 0.0 for a in accuracies):
        raise FusionError("degenerate weights: every model is wrong on every sample")
    return WeightVector(values=tuple(accuracies))


def fuse_panel(panel: AlignedPanel, config: FusionConfig) -> PredictionSet | dict[str, int]:
    """Apply the configured fusion to every sample of an aligned panel.

    Averaging strategies return a PredictionSet with model id
    ``ensemble:<strategy>``; majority voting returns a per-sample decision
    mapping. Deterministic given (panel, config).
    """
    if config.weights is not None and len(config.weights) != panel.n_models:
        raise FusionError(
            f"panel has {panel.n_models} models but {len(config.weights)} weights were given"
        )
    if config.strategy == MAJORITY_VOTE:
        return {
            sid: fuse_majority(panel.scores_for(sid), config.threshold)
            for sid in panel.labels.entries
        }
    if config.strategy == WEIGHTED_AVERAGE:
        fused = {
            sid: fuse_weighted(panel.scores_for(sid), config.weights)
            for sid in panel.labels.entries
        }
    else:
        fused = {sid: fuse_plain(panel.scores_for(sid)) for sid in panel.labels.entries}
    return PredictionSet(model_id=f"ensemble:{config.strategy}", scores=fused)


def panel_decisions(
    panel: AlignedPanel, config: FusionConfig
) -> tuple[PredictionSet | None, Mapping[str, int]]:
    """Fuse a panel and threshold the result into per-sample decisions.

    Returns ``(fused_scores_or_None, decisions)``; the first element is None
    for majority voting, which produces decisions directly.
    """
    result = fuse_panel(panel, config)
    if isinstance(result, PredictionSet):
        decisions = {sid: decide(s, config.threshold) for sid, s in result.scores.items()}
        return result, decisions
    return None, result
