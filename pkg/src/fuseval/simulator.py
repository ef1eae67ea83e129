"""Deterministic synthetic prediction generation and the built-in fixture.

Scores are placed with the standard library Mersenne Twister, recorded in
emitted provenance as generator id ``mt19937-v1``; swapping the generator
would be a breaking format change for anyone relying on byte-identical
fixtures. Generation is single-threaded by contract (determinism over
speed).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import SimulationError
from .predictions import AlignedPanel, LabelSet, PredictionSet, align

GENERATOR_ID = "mt19937-v1"


@dataclass(frozen=True)
class ModelProfile:
    """Per-model behavior: per-class recalls and how extreme the scores are.

    ``sharpness`` > 0 controls the margin between scores and the 0.5
    threshold: 1.0 gives uniform margins, larger values push scores toward
    0/1, values below 1 cluster them near the threshold.
    """

    recall0: float
    recall1: float
    sharpness: float = 8.0

    def __post_init__(self):
        for name in ("recall0", "recall1"):
            v = getattr(self, name)
            if not (math.isfinite(v) and 0.0 <= v <= 1.0):
                raise SimulationError(f"{name} must be in [0, 1], got {v!r}")
        if not (math.isfinite(self.sharpness) and self.sharpness > 0.0):
            raise SimulationError(f"sharpness must be positive, got {self.sharpness!r}")


@dataclass(frozen=True)
class SimSpec:
    n_class0: int
    n_class1: int
    models: tuple[ModelProfile, ...]
    error_overlap: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.n_class0 < 0 or self.n_class1 < 0 or self.n_class0 + self.n_class1 < 1:
            raise SimulationError("need at least one sample across the two classes")
        if not self.models:
            raise SimulationError("at least one model profile is required")
        if not 0.0 <= self.error_overlap <= 1.0:
            raise SimulationError(f"error_overlap must be in [0, 1], got {self.error_overlap!r}")
        if not 0 <= self.seed < 2**64:
            raise SimulationError("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class FixtureBundle:
    labels: LabelSet
    models: tuple[PredictionSet, ...]
    provenance: str

    def panel(self) -> AlignedPanel:
        return align(self.labels, self.models)


def _margin(rng: random.Random, sharpness: float) -> float:
    # Distance from the 0.5 threshold; kept strictly positive so wrong-side
    # scores stay strictly below the threshold.
    return max(1e-9, 0.5 * rng.random() ** (1.0 / sharpness))


def _error_layout(n: int, error_counts: list[int], overlap: float) -> list[set[int]]:
    """Assign per-model wrong-decision indices within one class.

    The shared "hard sample" pool (indices [0, pool)) is sized as
    round(overlap * max error count) and is wrong for *every* model; each
    model's remaining errors get a disjoint block after the pool.
    """
    if not any(error_counts):
        return [set() for _ in error_counts]
    pool = round(overlap * max(error_counts))
    if pool > min(error_counts):
        raise SimulationError(
            f"infeasible error overlap: shared pool of {pool} exceeds the smallest "
            f"per-model error count {min(error_counts)}"
        )
    wrong: list[set[int]] = []
    cursor = pool
    for count in error_counts:
        extra = count - pool
        block = set(range(cursor, cursor + extra))
        cursor += extra
        wrong.append(set(range(pool)) | block)
    if cursor > n:
        raise SimulationError(
            f"infeasible error layout: {cursor} distinct error samples needed "
            f"but the class has only {n}"
        )
    return wrong


def simulate(spec: SimSpec) -> FixtureBundle:
    """Generate a labeled panel with exact per-class error counts per model.

    Each model gets exactly round(recall * n) correct decisions per class
    (ties round to even); identical specs produce bit-identical bundles.
    """
    width = max(1, len(str(spec.n_class0 + spec.n_class1 - 1)))
    ids = [f"s{i:0{width}d}" for i in range(spec.n_class0 + spec.n_class1)]
    labels = LabelSet(
        entries={sid: (0 if i < spec.n_class0 else 1) for i, sid in enumerate(ids)}
    )

    errors = {
        0: [spec.n_class0 - round(m.recall0 * spec.n_class0) for m in spec.models],
        1: [spec.n_class1 - round(m.recall1 * spec.n_class1) for m in spec.models],
    }
    wrong0 = _error_layout(spec.n_class0, errors[0], spec.error_overlap)
    wrong1 = _error_layout(spec.n_class1, errors[1], spec.error_overlap)

    rng = random.Random(spec.seed)
    models = []
    for mi, profile in enumerate(spec.models):
        scores: dict[str, float] = {}
        for i, sid in enumerate(ids):
            truth = labels.entries[sid]
            if truth == 0:
                is_wrong = i in wrong0[mi]
            else:
                is_wrong = (i - spec.n_class0) in wrong1[mi]
            predicted = (1 - truth) if is_wrong else truth
            m = _margin(rng, profile.sharpness)
            scores[sid] = 0.5 + m if predicted == 1 else 0.5 - m
        models.append(PredictionSet(model_id=f"m{mi + 1}", scores=scores))

    lines = [
        "fixture: simulated",
        f"generator: {GENERATOR_ID}",
        f"seed: {spec.seed}",
        f"samples: {spec.n_class0} class-0 + {spec.n_class1} class-1",
        f"error_overlap: {spec.error_overlap!r}",
    ]
    for mi, profile in enumerate(spec.models):
        lines.append(
            f"m{mi + 1}: recall0={profile.recall0!r} recall1={profile.recall1!r} "
            f"sharpness={profile.sharpness!r} -> class0 errors={errors[0][mi]}, "
            f"class1 errors={errors[1][mi]}"
        )
    return FixtureBundle(labels=labels, models=tuple(models), provenance="\n".join(lines) + "\n")


def fit_error_counts(
    precision0: float,
    recall0: float,
    precision1: float,
    recall1: float,
    support0: int,
    support1: int,
) -> tuple[int, int]:
    """Exhaustively fit integer per-class error counts to rounded metric cells.

    Searches every (class-0 errors, class-1 errors) pair and minimizes the
    maximum absolute deviation of the implied precision/recall from the four
    targets. Ties resolve to the smallest class-0 count, then the smallest
    class-1 count.
    """
    b = np.arange(support0 + 1, dtype=np.float64)[:, None]
    d = np.arange(support1 + 1, dtype=np.float64)[None, :]
    a = support0 - b
    e = support1 - d
    with np.errstate(divide="ignore", invalid="ignore"):
        p0 = np.where(a + d > 0, a / (a + d), 0.0)
        p1 = np.where(e + b > 0, e / (e + b), 0.0)
    r0 = np.broadcast_to(a / support0, p0.shape)
    r1 = np.broadcast_to(e / support1, p0.shape)
    deviation = np.maximum.reduce(
        [
            np.abs(p0 - precision0),
            np.abs(r0 - recall0),
            np.abs(p1 - precision1),
            np.abs(r1 - recall1),
        ]
    )
    flat = int(np.argmin(deviation))
    i, j = divmod(flat, deviation.shape[1])
    return int(i), int(j)


# Rounded per-class (precision0, recall0, precision1, recall1) targets each
# fixture model is fitted to, strongest backbone first.
_BENCHMARK_TARGETS = (
    ("resnet50", 0.96, 0.96, 0.98, 0.98),
    ("inceptionv3", 0.94, 0.96, 0.98, 0.97),
    ("densenet201", 0.89, 0.94, 0.97, 0.95),
)
_SUPPORT0 = 372
_SUPPORT1 = 815
_FIXTURE_SEED = 1187

# Disagreement ("knife-edge") score patterns, one score per model in panel
# order. The two weaker models err while the strongest is confidently right;
# the plain mean lands ~0.0025 on the wrong side of 0.5 while the weighted
# mean stays on the right side for any weight vector near the models'
# accuracies. These samples are what separate weighted from plain averaging.
_KNIFE1_SCORES = (1.0, 0.4925, 0.0)  # true class 1
_KNIFE0_SCORES = (0.0, 0.5075, 1.0)  # true class 0

# Target fused-error budget: the shared pools below are the only samples the
# weighted ensemble gets wrong.
_POOL0_TARGET, _KNIFE0_TARGET = 7, 5
_POOL1_TARGET, _KNIFE1_TARGET = 15, 7


def _fixture_groups(
    budgets: list[int], pool_target: int, knife_target: int, n: int
) -> tuple[int, int, list[range]]:
    """Split per-model error budgets into shared pool, knife, and solo runs."""
    pool = min(pool_target, min(budgets))
    knife = max(0, min(knife_target, min(budgets[1:]) - pool))
    solos = []
    cursor = pool + knife
    for mi, budget in enumerate(budgets):
        count = budget - pool - (knife if mi > 0 else 0)
        if count < 0 or cursor + count > n:
            raise SimulationError("fixture error layout does not fit its class supports")
        solos.append(range(cursor, cursor + count))
        cursor += count
    return pool, knife, solos


@lru_cache(maxsize=1)
def breakhis_fixture() -> FixtureBundle:
    """The built-in 1187-sample, three-model BreakHis-style benchmark bundle.

    Per-model confusion counts are fitted to the rounded precision/recall
    cells in ``_BENCHMARK_TARGETS`` via :func:`fit_error_counts`; errors are
    laid out so that accuracy-weighted fusion corrects every error outside
    the shared pool while plain averaging and majority voting also lose the
    knife-edge disagreement samples.
    """
    budgets0, budgets1 = [], []
    for _, p0, r0, p1, r1 in _BENCHMARK_TARGETS:
        b, d = fit_error_counts(p0, r0, p1, r1, _SUPPORT0, _SUPPORT1)
        budgets0.append(b)
        budgets1.append(d)

    pool0, knife0, solos0 = _fixture_groups(budgets0, _POOL0_TARGET, _KNIFE0_TARGET, _SUPPORT0)
    pool1, knife1, solos1 = _fixture_groups(budgets1, _POOL1_TARGET, _KNIFE1_TARGET, _SUPPORT1)

    benign = [f"b{i:04d}" for i in range(_SUPPORT0)]
    malignant = [f"m{i:04d}" for i in range(_SUPPORT1)]
    labels = LabelSet(
        entries={**{sid: 0 for sid in benign}, **{sid: 1 for sid in malignant}}
    )

    rng = random.Random(_FIXTURE_SEED)
    models = []
    for mi, (model_id, *_targets) in enumerate(_BENCHMARK_TARGETS):
        scores: dict[str, float] = {}
        for cls, class_ids, pool, knife, solos, knife_scores in (
            (0, benign, pool0, knife0, solos0, _KNIFE0_SCORES),
            (1, malignant, pool1, knife1, solos1, _KNIFE1_SCORES),
        ):
            for i, sid in enumerate(class_ids):
                if pool <= i < pool + knife:
                    scores[sid] = knife_scores[mi]
                    continue
                is_wrong = i < pool or i in solos[mi]
                predicted = (1 - cls) if is_wrong else cls
                # confident band: correct scores in [0.9, 1.0), wrong in (0, 0.1]
                m = 0.4 + 0.1 * rng.random()
                scores[sid] = 0.5 + m if predicted == 1 else 0.5 - m
        models.append(PredictionSet(model_id=model_id, scores=scores))

    lines = [
        "fixture: breakhis-benchmark",
        f"samples: {_SUPPORT0} class-0 (benign) + {_SUPPORT1} class-1 (malignant)",
        "fit: exhaustive integer search minimizing max deviation from rounded "
        "per-class precision/recall targets (counts reconstruction; per-image "
        "outputs are synthetic, not recorded ones)",
    ]
    for mi, (model_id, p0, r0, p1, r1) in enumerate(_BENCHMARK_TARGETS):
        lines.append(
            f"  {model_id}: targets p0={p0} r0={r0} p1={p1} r1={r1} -> "
            f"class0 errors={budgets0[mi]}, class1 errors={budgets1[mi]}"
        )
    lines += [
        f"error layout: shared all-wrong pool ({pool0} class-0, {pool1} class-1); "
        f"knife-edge disagreement samples ({knife0} class-0, {knife1} class-1) "
        "where the two weaker models err; remaining errors disjoint per model",
        f"scores: generator {GENERATOR_ID}, seed {_FIXTURE_SEED}",
    ]
    return FixtureBundle(labels=labels, models=tuple(models), provenance="\n".join(lines) + "\n")
