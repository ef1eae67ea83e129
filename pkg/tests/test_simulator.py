"""Synthetic bundle generation and the built-in benchmark fixture."""

import pytest

from fuseval import (
    FusionConfig,
    SimulationError,
    SimSpec,
    WeightVector,
    breakhis_fixture,
    confusion,
    decide,
    fit_error_counts,
    load_labels,
    load_predictions,
    panel_decisions,
    report,
    serialize_labels,
    serialize_predictions,
    simulate,
    weights_from_accuracy,
)
from fuseval.simulator import GENERATOR_ID, ModelProfile


def model_confusion(bundle, index, threshold=0.5):
    model = bundle.models[index]
    decisions = {sid: decide(s, threshold) for sid, s in model.scores.items()}
    return confusion(bundle.labels, decisions)


class TestSimulate:
    def test_perfect_recalls_give_diagonal_matrices(self):
        spec = SimSpec(
            n_class0=8,
            n_class1=12,
            models=(ModelProfile(1.0, 1.0), ModelProfile(1.0, 1.0)),
            seed=3,
        )
        bundle = simulate(spec)
        for i in range(2):
            assert model_confusion(bundle, i).counts == ((8, 0), (0, 12))

    def test_exact_error_counts(self):
        spec = SimSpec(
            n_class0=10,
            n_class1=10,
            models=(ModelProfile(recall0=0.5, recall1=1.0),),
            seed=0,
        )
        cm = model_confusion(simulate(spec), 0)
        assert cm.counts == ((5, 5), (0, 10))

    def test_implied_counts_match_exactly(self):
        spec = SimSpec(
            n_class0=40,
            n_class1=60,
            models=(ModelProfile(recall0=0.9, recall1=0.75),),
            seed=11,
        )
        cm = model_confusion(simulate(spec), 0)
        assert cm.counts == ((36, 4), (15, 45))

    def test_same_seed_is_byte_identical(self):
        spec = SimSpec(
            n_class0=25,
            n_class1=30,
            models=(ModelProfile(0.9, 0.85), ModelProfile(0.8, 0.95)),
            error_overlap=0.5,
            seed=42,
        )
        a, b = simulate(spec), simulate(spec)
        assert serialize_labels(a.labels) == serialize_labels(b.labels)
        for ma, mb in zip(a.models, b.models):
            assert serialize_predictions(ma) == serialize_predictions(mb)
        assert a.provenance == b.provenance

    def test_different_seed_changes_scores(self):
        base = dict(n_class0=25, n_class1=30, models=(ModelProfile(0.9, 0.85),))
        a = simulate(SimSpec(seed=1, **base))
        b = simulate(SimSpec(seed=2, **base))
        assert a.models[0].scores != b.models[0].scores

    def test_output_passes_ingestion_round_trip(self):
        spec = SimSpec(
            n_class0=15,
            n_class1=20,
            models=(ModelProfile(0.8, 0.9), ModelProfile(0.95, 0.7)),
            error_overlap=0.25,
            seed=9,
        )
        bundle = simulate(spec)
        labels = load_labels(serialize_labels(bundle.labels))
        assert labels == bundle.labels
        for model in bundle.models:
            assert load_predictions(serialize_predictions(model)) == model
        bundle.panel()  # alignment must hold

    def test_overlap_places_shared_errors(self):
        # errors: model1 -> 4, model2 -> 2 per class0; pool = round(0.5*4) = 2
        spec = SimSpec(
            n_class0=10,
            n_class1=4,
            models=(ModelProfile(0.6, 1.0), ModelProfile(0.8, 1.0)),
            error_overlap=0.5,
            seed=5,
        )
        bundle = simulate(spec)
        wrong = []
        for model in bundle.models:
            wrong.append(
                {
                    sid
                    for sid, s in model.scores.items()
                    if decide(s) != bundle.labels.entries[sid]
                }
            )
        assert len(wrong[0]) == 4 and len(wrong[1]) == 2
        assert wrong[1] <= wrong[0]  # the smaller error set is the shared pool
        assert len(wrong[0] & wrong[1]) == 2

    def test_infeasible_overlap_pool_exceeds_smallest(self):
        # errors per class0: 4 and 2; overlap 1.0 -> pool 4 > smallest 2
        spec = SimSpec(
            n_class0=10,
            n_class1=4,
            models=(ModelProfile(0.6, 1.0), ModelProfile(0.8, 1.0)),
            error_overlap=1.0,
            seed=5,
        )
        with pytest.raises(SimulationError, match="shared pool"):
            simulate(spec)

    def test_infeasible_disjoint_layout(self):
        spec = SimSpec(
            n_class0=3,
            n_class1=1,
            models=(ModelProfile(0.0, 1.0), ModelProfile(0.0, 1.0)),
            error_overlap=0.0,
            seed=5,
        )
        with pytest.raises(SimulationError, match="infeasible error layout"):
            simulate(spec)

    def test_spec_validation(self):
        with pytest.raises(SimulationError):
            SimSpec(n_class0=0, n_class1=0, models=(ModelProfile(1, 1),))
        with pytest.raises(SimulationError):
            SimSpec(n_class0=1, n_class1=1, models=())
        with pytest.raises(SimulationError):
            ModelProfile(recall0=1.2, recall1=0.5)
        with pytest.raises(SimulationError):
            ModelProfile(recall0=0.5, recall1=0.5, sharpness=0.0)

    def test_provenance_names_generator(self):
        spec = SimSpec(n_class0=2, n_class1=2, models=(ModelProfile(1, 1),), seed=7)
        assert GENERATOR_ID in simulate(spec).provenance


class TestFitErrorCounts:
    def test_recovers_exact_counts(self):
        # counts b=2, d=1 on supports (10, 10) imply these exact cells
        b, d = fit_error_counts(8 / 9, 0.8, 9 / 11, 0.9, 10, 10)
        assert (b, d) == (2, 1)

    def test_rounded_cells_still_recover(self):
        b, d = fit_error_counts(0.89, 0.8, 0.82, 0.9, 10, 10)
        assert (b, d) == (2, 1)

    def test_perfect_model(self):
        assert fit_error_counts(1.0, 1.0, 1.0, 1.0, 50, 70) == (0, 0)


class TestBenchmarkFixture:
    def test_supports(self):
        bundle = breakhis_fixture()
        assert (bundle.labels.support0, bundle.labels.support1) == (372, 815)
        assert len(bundle.models) == 3

    def test_model_order_and_ids(self):
        bundle = breakhis_fixture()
        assert [m.model_id for m in bundle.models] == [
            "resnet50",
            "inceptionv3",
            "densenet201",
        ]

    def test_per_model_accuracies_near_published(self):
        bundle = breakhis_fixture()
        weights = weights_from_accuracy(bundle.panel())
        for got, published in zip(weights.values, (0.9755, 0.9663, 0.9455)):
            assert got == pytest.approx(published, abs=0.01)

    def test_fused_beats_every_single_model(self):
        bundle = breakhis_fixture()
        panel = bundle.panel()
        config = FusionConfig(
            strategy="weighted_average", weights=WeightVector((0.9755, 0.9663, 0.9455))
        )
        _, decisions = panel_decisions(panel, config)
        fused_rep = report(confusion(bundle.labels, decisions))
        assert fused_rep.accuracy >= 0.975
        singles = weights_from_accuracy(panel)
        assert all(fused_rep.accuracy > acc for acc in singles.values)

    def test_fused_confusion_budget(self):
        bundle = breakhis_fixture()
        config = FusionConfig(
            strategy="weighted_average", weights=WeightVector((0.9755, 0.9663, 0.9455))
        )
        _, decisions = panel_decisions(bundle.panel(), config)
        cm = confusion(bundle.labels, decisions)
        assert cm.false_positives <= 8
        assert cm.false_negatives <= 17

    def test_deterministic_rebuild(self):
        first = breakhis_fixture()
        breakhis_fixture.cache_clear()
        second = breakhis_fixture()
        assert serialize_labels(first.labels) == serialize_labels(second.labels)
        for a, b in zip(first.models, second.models):
            assert serialize_predictions(a) == serialize_predictions(b)
        assert first.provenance == second.provenance

    def test_provenance_describes_fit(self):
        provenance = breakhis_fixture().provenance
        assert "resnet50" in provenance
        assert GENERATOR_ID in provenance
        assert "exhaustive" in provenance
