"""FastAPI service wrapping the core package.

Endpoints mirror the CLI commands one-to-one: POST /evaluate, /fuse,
/compare, /simulate, plus GET /healthz. Domain errors surface as HTTP 422
with a machine-parsable ``{"error": <category>, "detail": <reason>}`` body.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import FusevalError, FusionError, IngestionError, SimulationError
from ..fusion import (
    MAJORITY_VOTE,
    STRATEGIES,
    WEIGHTED_AVERAGE,
    FusionConfig,
    WeightVector,
    panel_decisions,
    weights_from_accuracy,
)
from ..metrics import ClassificationReport, ConfusionMatrix, confusion, decide, report
from ..predictions import (
    AlignedPanel,
    LabelSet,
    PredictionSet,
    align,
    load_labels,
    load_predictions,
    serialize_labels,
    serialize_predictions,
)
from ..simulator import (
    GENERATOR_ID,
    ModelProfile,
    SimSpec,
    breakhis_fixture,
    simulate,
)
from .schemas import (
    CompareRequest,
    CompareResponse,
    CompareRow,
    EvaluateRequest,
    EvaluateResponse,
    FuseRequest,
    FuseResponse,
    HealthResponse,
    PredictionFileOut,
    ReportOut,
    SimulateRequest,
    SimulateResponse,
)


def _report_out(rep: ClassificationReport) -> ReportOut:
    def block(metrics):
        return {
            "precision": metrics.precision,
            "recall": metrics.recall,
            "f1_score": metrics.f1,
            "support": metrics.support,
        }

    return ReportOut(
        class0=block(rep.class0),
        class1=block(rep.class1),
        macro_avg=block(rep.macro_avg),
        weighted_avg=block(rep.weighted_avg),
        accuracy=rep.accuracy,
    )


def _matrix(cm: ConfusionMatrix) -> list[list[int]]:
    return [list(cm.counts[0]), list(cm.counts[1])]


def _names(given: list[str] | None, count: int, stem: str) -> list[str]:
    if given is None:
        return [f"<{stem} {i + 1}>" for i in range(count)]
    if len(given) != count:
        raise IngestionError(f"{len(given)} {stem} names given for {count} files")
    return given


def _load_panel(
    labels_text: str,
    labels_name: str,
    prediction_texts: list[str],
    model_ids: list[str | None] | None,
    prediction_names: list[str] | None,
) -> AlignedPanel:
    labels = load_labels(labels_text, source=labels_name)
    names = _names(prediction_names, len(prediction_texts), "prediction")
    if model_ids is not None and len(model_ids) != len(prediction_texts):
        raise IngestionError(
            f"{len(model_ids)} model ids given for {len(prediction_texts)} prediction files"
        )
    models = []
    for i, text in enumerate(prediction_texts):
        override = model_ids[i] if model_ids is not None else None
        models.append(load_predictions(text, model_id=override, source=names[i]))
    return align(labels, models)


def _resolve_weights(
    panel: AlignedPanel,
    weights: list[float] | None,
    weights_from,
    threshold: float,
) -> tuple[WeightVector | None, dict]:
    if weights is not None and weights_from is not None:
        raise FusionError("give either explicit weights or a weight source, not both")
    if weights is not None:
        if len(weights) != panel.n_models:
            raise FusionError(
                f"{len(weights)} weights given for {panel.n_models} models"
            )
        vector = WeightVector(values=tuple(weights))
        meta = {"source": "explicit", "values": list(vector.values)}
    elif weights_from is not None:
        source_labels = load_labels(weights_from.labels, source="<weight-source labels>")
        source_models = []
        for i, text in enumerate(weights_from.predictions):
            name = f"<weight-source {i + 1}>"
            try:
                source_models.append(load_predictions(text, source=name))
            except IngestionError:
                # No '# model:' comment: fall back to a positional placeholder.
                source_models.append(load_predictions(text, model_id=f"w{i + 1}", source=name))
        if len(source_models) != panel.n_models:
            raise FusionError(
                f"weight source has {len(source_models)} models, panel has {panel.n_models}"
            )
        # Match source models to panel models by id when the id sets coincide
        # (protects against differently ordered file lists); positional otherwise.
        by_id = {m.model_id: m for m in source_models}
        if len(by_id) == panel.n_models and set(by_id) == set(panel.model_ids):
            source_models = [by_id[mid] for mid in panel.model_ids]
        vector = weights_from_accuracy(align(source_labels, source_models), threshold)
        meta = {"source": "derived_from_accuracy", "values": list(vector.values)}
    else:
        return None, {"source": None, "values": None}
    meta["model_ids"] = list(panel.model_ids)
    return vector, meta


def _manifest(command: str, **fields) -> dict:
    return {"tool": "fuseval", "version": __version__, "command": command, **fields}


def create_app() -> FastAPI:
    app = FastAPI(title="fuseval", version=__version__)

    @app.exception_handler(FusevalError)
    async def _domain_error(request: Request, exc: FusevalError) -> JSONResponse:
        return JSONResponse(status_code=422, content={"error": exc.category, "detail": str(exc)})

    @app.get("/healthz", response_model=HealthResponse)
    def healthz() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.post("/evaluate", response_model=EvaluateResponse)
    def evaluate(req: EvaluateRequest) -> EvaluateResponse:
        panel = _load_panel(
            req.labels, req.labels_name, [req.predictions], [req.model_id], [req.predictions_name]
        )
        model = panel.models[0]
        decisions = {sid: decide(s, req.threshold) for sid, s in model.scores.items()}
        cm = confusion(panel.labels, decisions)
        rep = report(cm)
        manifest = _manifest(
            "evaluate",
            inputs={"labels": req.labels_name, "predictions": [req.predictions_name]},
            model_id=model.model_id,
            threshold=req.threshold,
        )
        return EvaluateResponse(
            model_id=model.model_id,
            report=_report_out(rep),
            confusion_matrix=_matrix(cm),
            manifest=manifest,
        )

    @app.post("/fuse", response_model=FuseResponse)
    def fuse(req: FuseRequest) -> FuseResponse:
        panel = _load_panel(
            req.labels, req.labels_name, req.predictions, req.model_ids, req.prediction_names
        )
        vector, weights_meta = _resolve_weights(panel, req.weights, req.weights_from, req.threshold)
        if req.strategy == WEIGHTED_AVERAGE and vector is None:
            raise FusionError(
                "strategy 'weighted_average' requires weights or a weight source"
            )
        config = FusionConfig(
            strategy=req.strategy,
            threshold=req.threshold,
            weights=vector if req.strategy == WEIGHTED_AVERAGE else None,
        )
        fused, decisions = panel_decisions(panel, config)
        if fused is None:
            fused = PredictionSet(
                model_id=f"ensemble:{MAJORITY_VOTE}",
                scores={sid: float(label) for sid, label in decisions.items()},
            )
        cm = confusion(panel.labels, decisions)
        rep = report(cm)
        manifest = _manifest(
            "fuse",
            inputs={
                "labels": req.labels_name,
                "predictions": _names(req.prediction_names, panel.n_models, "prediction"),
            },
            strategy=req.strategy,
            threshold=req.threshold,
            weights=weights_meta,
        )
        return FuseResponse(
            model_id=fused.model_id,
            fused_file=serialize_predictions(fused),
            effective_weights=list(vector.values) if vector is not None else None,
            report=_report_out(rep),
            confusion_matrix=_matrix(cm),
            manifest=manifest,
        )

    @app.post("/compare", response_model=CompareResponse)
    def compare(req: CompareRequest) -> CompareResponse:
        panel = _load_panel(
            req.labels, req.labels_name, req.predictions, req.model_ids, req.prediction_names
        )
        vector, weights_meta = _resolve_weights(panel, req.weights, req.weights_from, req.threshold)
        if vector is None:
            raise FusionError(
                "comparison includes a weighted-average row; provide weights or a weight source"
            )

        def row(model_id: str, labels: LabelSet, decisions) -> CompareRow:
            cm = confusion(labels, decisions)
            rep = report(cm)
            return CompareRow(
                model_id=model_id,
                accuracy=rep.accuracy,
                macro_f1=rep.macro_avg.f1,
                weighted_f1=rep.weighted_avg.f1,
                false_positives=cm.false_positives,
                false_negatives=cm.false_negatives,
            )

        rows = []
        for model in panel.models:
            decisions = {sid: decide(s, req.threshold) for sid, s in model.scores.items()}
            rows.append(row(model.model_id, panel.labels, decisions))
        for strategy in STRATEGIES:
            config = FusionConfig(
                strategy=strategy,
                threshold=req.threshold,
                weights=vector if strategy == WEIGHTED_AVERAGE else None,
            )
            _, decisions = panel_decisions(panel, config)
            rows.append(row(f"ensemble:{strategy}", panel.labels, decisions))
        rows.sort(key=lambda r: (-r.accuracy, r.model_id))

        manifest = _manifest(
            "compare",
            inputs={
                "labels": req.labels_name,
                "predictions": _names(req.prediction_names, panel.n_models, "prediction"),
            },
            threshold=req.threshold,
            weights=weights_meta,
        )
        return CompareResponse(rows=rows, manifest=manifest)

    @app.post("/simulate", response_model=SimulateResponse)
    def run_simulate(req: SimulateRequest) -> SimulateResponse:
        if req.preset is not None:
            if req.models is not None or req.n_class0 is not None or req.n_class1 is not None:
                raise SimulationError("a preset cannot be combined with explicit spec fields")
            bundle = breakhis_fixture()
            spec_meta: dict = {"preset": req.preset}
        else:
            if req.n_class0 is None or req.n_class1 is None or not req.models:
                raise SimulationError(
                    "either a preset or n_class0, n_class1 and model profiles are required"
                )
            spec = SimSpec(
                n_class0=req.n_class0,
                n_class1=req.n_class1,
                models=tuple(
                    ModelProfile(m.recall0, m.recall1, m.sharpness) for m in req.models
                ),
                error_overlap=req.error_overlap,
                seed=req.seed,
            )
            bundle = simulate(spec)
            spec_meta = {
                "n_class0": spec.n_class0,
                "n_class1": spec.n_class1,
                "models": [
                    {"recall0": m.recall0, "recall1": m.recall1, "sharpness": m.sharpness}
                    for m in spec.models
                ],
                "error_overlap": spec.error_overlap,
                "seed": spec.seed,
            }
        manifest = _manifest("simulate", spec=spec_meta, generator=GENERATOR_ID)
        return SimulateResponse(
            label_file=serialize_labels(bundle.labels),
            prediction_files=[
                PredictionFileOut(
                    model_id=m.model_id,
                    filename=f"predictions_{m.model_id}.csv",
                    content=serialize_predictions(m),
                )
                for m in bundle.models
            ],
            provenance=bundle.provenance,
            manifest=manifest,
        )

    return app


__all__ = ["create_app"]
