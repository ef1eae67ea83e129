"""fuseval: accuracy-weighted fusion and evaluation of binary classifiers."""

__version__ = "0.1.0"

from .errors import (
    AlignmentError,
    FusevalError,
    FusionError,
    IngestionError,
    ServiceError,
    SimulationError,
)
from .fusion import (
    MAJORITY_VOTE,
    PLAIN_AVERAGE,
    STRATEGIES,
    WEIGHTED_AVERAGE,
    FusionConfig,
    WeightVector,
    fuse_majority,
    fuse_panel,
    fuse_plain,
    fuse_weighted,
    panel_decisions,
    weights_from_accuracy,
)
from .metrics import (
    ClassificationReport,
    ClassMetrics,
    ConfusionMatrix,
    accuracy,
    confusion,
    decide,
    report,
)
from .predictions import (
    AlignedPanel,
    LabelSet,
    PredictionSet,
    align,
    load_labels,
    load_predictions,
    serialize_labels,
    serialize_predictions,
)
from .simulator import (
    GENERATOR_ID,
    FixtureBundle,
    ModelProfile,
    SimSpec,
    breakhis_fixture,
    fit_error_counts,
    simulate,
)

__all__ = [
    "__version__",
    "AlignedPanel",
    "AlignmentError",
    "ClassMetrics",
    "ClassificationReport",
    "ConfusionMatrix",
    "FixtureBundle",
    "FusevalError",
    "FusionConfig",
    "FusionError",
    "GENERATOR_ID",
    "IngestionError",
    "LabelSet",
    "MAJORITY_VOTE",
    "ModelProfile",
    "PLAIN_AVERAGE",
    "PredictionSet",
    "STRATEGIES",
    "ServiceError",
    "SimSpec",
    "SimulationError",
    "WEIGHTED_AVERAGE",
    "WeightVector",
    "accuracy",
    "align",
    "breakhis_fixture",
    "confusion",
    "decide",
    "fit_error_counts",
    "fuse_majority",
    "fuse_panel",
    "fuse_plain",
    "fuse_weighted",
    "load_labels",
    "load_predictions",
    "panel_decisions",
    "report",
    "serialize_labels",
    "serialize_predictions",
    "simulate",
    "weights_from_accuracy",
]
