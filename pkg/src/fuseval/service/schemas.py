"""Pydantic request/response models for the fuseval service endpoints.

File contents travel in request bodies (not paths), so the service has no
filesystem coupling and serves multiple clients; optional ``*_name`` fields
only label inputs inside manifests and error messages.
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

Strategy = Literal["weighted_average", "plain_average", "majority_vote"]

_ALLOW_MODEL_FIELDS = ConfigDict(protected_namespaces=())


class WeightSource(BaseModel):
    """A labels/predictions bundle on which per-model accuracies are measured."""

    labels: str
    predictions: list[str] = Field(min_length=1)


class ClassMetricsOut(BaseModel):
    precision: float
    recall: float
    f1_score: float
    support: int


class ReportOut(BaseModel):
    class0: ClassMetricsOut
    class1: ClassMetricsOut
    macro_avg: ClassMetricsOut
    weighted_avg: ClassMetricsOut
    accuracy: float


class EvaluateRequest(BaseModel):
    model_config = _ALLOW_MODEL_FIELDS

    labels: str
    predictions: str
    model_id: str | None = None
    threshold: float = Field(default=0.5, gt=0.0, lt=1.0)
    labels_name: str = "<labels>"
    predictions_name: str = "<predictions>"


class EvaluateResponse(BaseModel):
    model_config = _ALLOW_MODEL_FIELDS

    model_id: str
    report: ReportOut
    confusion_matrix: list[list[int]]
    manifest: dict


class FuseRequest(BaseModel):
    model_config = _ALLOW_MODEL_FIELDS

    labels: str
    predictions: list[str] = Field(min_length=1)
    model_ids: list[str | None] | None = None
    strategy: Strategy = "weighted_average"
    threshold: float = Field(default=0.5, gt=0.0, lt=1.0)
    weights: list[float] | None = None
    weights_from: WeightSource | None = None
    labels_name: str = "<labels>"
    prediction_names: list[str] | None = None


class FuseResponse(BaseModel):
    model_config = _ALLOW_MODEL_FIELDS

    model_id: str
    fused_file: str
    effective_weights: list[float] | None
    report: ReportOut
    confusion_matrix: list[list[int]]
    manifest: dict


class CompareRequest(BaseModel):
    model_config = _ALLOW_MODEL_FIELDS

    labels: str
    predictions: list[str] = Field(min_length=2)
    model_ids: list[str | None] | None = None
    threshold: float = Field(default=0.5, gt=0.0, lt=1.0)
    weights: list[float] | None = None
    weights_from: WeightSource | None = None
    labels_name: str = "<labels>"
    prediction_names: list[str] | None = None


class CompareRow(BaseModel):
    model_config = _ALLOW_MODEL_FIELDS

    model_id: str
    accuracy: float
    macro_f1: float
    weighted_f1: float
    false_positives: int
    false_negatives: int


class CompareResponse(BaseModel):
    rows: list[CompareRow]
    manifest: dict


class ModelProfileIn(BaseModel):
    recall0: float = Field(ge=0.0, le=1.0)
    recall1: float = Field(ge=0.0, le=1.0)
    sharpness: float = Field(default=8.0, gt=0.0)


class SimulateRequest(BaseModel):
    preset: Literal["breakhis"] | None = None
    n_class0: int | None = Field(default=None, ge=0)
    n_class1: int | None = Field(default=None, ge=0)
    models: list[ModelProfileIn] | None = None
    error_overlap: float = Field(default=0.0, ge=0.0, le=1.0)
    seed: int = Field(default=0, ge=0, lt=2**64)


class PredictionFileOut(BaseModel):
    model_config = _ALLOW_MODEL_FIELDS

    model_id: str
    filename: str
    content: str


class SimulateResponse(BaseModel):
    label_file: str
    prediction_files: list[PredictionFileOut]
    provenance: str
    manifest: dict


class HealthResponse(BaseModel):
    status: str
    version: str
