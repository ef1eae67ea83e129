"""Endpoint behavior of the FastAPI service."""

import pytest
from fastapi.testclient import TestClient

from fuseval import __version__, load_predictions
from fuseval.service.app import create_app

LABELS = "sample_id,label\na,0\nb,0\nc,1\nd,1\n"
MODEL_A = "# model: alpha\nsample_id,score\na,0.1\nb,0.7\nc,0.8\nd,0.9\n"
MODEL_B = "# model: beta\nsample_id,score\na,0.2\nb,0.1\nc,0.9\nd,0.4\n"


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


class TestHealth:
    def test_healthz(self, client):
        body = client.get("/healthz").json()
        assert body == {"status": "ok", "version": __version__}


class TestEvaluate:
    def test_happy_path(self, client):
        resp = client.post(
            "/evaluate",
            json={"labels": LABELS, "predictions": MODEL_A, "labels_name": "l.csv"},
        )
        assert resp.status_code == 200
        body = resp.json()
        assert body["model_id"] == "alpha"
        assert body["report"]["accuracy"] == 0.75
        assert body["confusion_matrix"] == [[1, 1], [0, 2]]
        assert body["manifest"]["command"] == "evaluate"
        assert body["manifest"]["inputs"]["labels"] == "l.csv"
        assert body["manifest"]["version"] == __version__

    def test_alignment_error_names_missing_sample(self, client):
        short = "# model: alpha\nsample_id,score\na,0.1\n"
        resp = client.post("/evaluate", json={"labels": LABELS, "predictions": short})
        assert resp.status_code == 422
        body = resp.json()
        assert body["error"] == "alignment"
        assert "b" in body["detail"]

    def test_ingestion_error_carries_row(self, client):
        bad = "# model: alpha\nsample_id,score\na,1.7\n"
        resp = client.post("/evaluate", json={"labels": LABELS, "predictions": bad})
        assert resp.status_code == 422
        assert resp.json()["error"] == "ingestion"
        assert ":3:" in resp.json()["detail"]

    def test_model_id_override(self, client):
        resp = client.post(
            "/evaluate",
            json={"labels": LABELS, "predictions": MODEL_A, "model_id": "custom"},
        )
        assert resp.json()["model_id"] == "custom"

    def test_request_validation_threshold(self, client):
        resp = client.post(
            "/evaluate",
            json={"labels": LABELS, "predictions": MODEL_A, "threshold": 1.5},
        )
        assert resp.status_code == 422


class TestFuse:
    def test_weighted_fuse(self, client):
        resp = client.post(
            "/fuse",
            json={
                "labels": LABELS,
                "predictions": [MODEL_A, MODEL_B],
                "strategy": "weighted_average",
                "weights": [3.0, 1.0],
            },
        )
        assert resp.status_code == 200
        body = resp.json()
        assert body["model_id"] == "ensemble:weighted_average"
        assert body["effective_weights"] == [3.0, 1.0]
        fused = load_predictions(body["fused_file"])
        assert fused.model_id == "ensemble:weighted_average"
        assert fused.scores["a"] == pytest.approx((0.1 * 3 + 0.2) / 4.0, abs=1e-12)
        assert body["manifest"]["weights"]["source"] == "explicit"
        assert body["manifest"]["weights"]["model_ids"] == ["alpha", "beta"]

    def test_weighted_requires_weights(self, client):
        resp = client.post(
            "/fuse",
            json={"labels": LABELS, "predictions": [MODEL_A, MODEL_B]},
        )
        assert resp.status_code == 422
        assert resp.json()["error"] == "fusion"

    def test_majority_emits_decision_file(self, client):
        resp = client.post(
            "/fuse",
            json={
                "labels": LABELS,
                "predictions": [MODEL_A, MODEL_B],
                "strategy": "majority_vote",
            },
        )
        body = resp.json()
        fused = load_predictions(body["fused_file"])
        assert set(fused.scores.values()) <= {0.0, 1.0}
        assert body["effective_weights"] is None

    def test_plain_single_model_identity(self, client):
        resp = client.post(
            "/fuse",
            json={"labels": LABELS, "predictions": [MODEL_A], "strategy": "plain_average"},
        )
        fused = load_predictions(resp.json()["fused_file"])
        assert fused.scores == load_predictions(MODEL_A).scores

    def test_weights_from_derives_accuracy(self, client):
        resp = client.post(
            "/fuse",
            json={
                "labels": LABELS,
                "predictions": [MODEL_A, MODEL_B],
                "strategy": "weighted_average",
                "weights_from": {"labels": LABELS, "predictions": [MODEL_A, MODEL_B]},
            },
        )
        body = resp.json()
        # alpha decides (0,1,1,1) -> 3/4; beta decides (0,0,1,0) -> 3/4
        assert body["effective_weights"] == [0.75, 0.75]
        assert body["manifest"]["weights"]["source"] == "derived_from_accuracy"

    def test_weights_from_matches_by_model_id(self, client):
        # alpha is perfect on the weight-source split, beta gets half right;
        # the source files arrive in reversed order, so correct assignment
        # can only come from matching the '# model:' ids.
        source_labels = "sample_id,label\nx,0\ny,1\n"
        source_alpha = "# model: alpha\nsample_id,score\nx,0.1\ny,0.9\n"
        source_beta = "# model: beta\nsample_id,score\nx,0.9\ny,0.8\n"
        resp = client.post(
            "/fuse",
            json={
                "labels": LABELS,
                "predictions": [MODEL_A, MODEL_B],
                "strategy": "weighted_average",
                "weights_from": {
                    "labels": source_labels,
                    "predictions": [source_beta, source_alpha],
                },
            },
        )
        assert resp.json()["effective_weights"] == [1.0, 0.5]

    def test_weight_count_mismatch(self, client):
        resp = client.post(
            "/fuse",
            json={
                "labels": LABELS,
                "predictions": [MODEL_A, MODEL_B],
                "weights": [1.0],
            },
        )
        assert resp.status_code == 422
        assert "2 models" in resp.json()["detail"]


class TestCompare:
    def test_rows_sorted_by_accuracy(self, client):
        resp = client.post(
            "/compare",
            json={
                "labels": LABELS,
                "predictions": [MODEL_A, MODEL_B],
                "weights": [1.0, 1.0],
            },
        )
        assert resp.status_code == 200
        rows = resp.json()["rows"]
        assert len(rows) == 5  # 2 singles + 3 ensembles
        accuracies = [r["accuracy"] for r in rows]
        assert accuracies == sorted(accuracies, reverse=True)
        ids = {r["model_id"] for r in rows}
        assert {"alpha", "beta", "ensemble:weighted_average"} <= ids

    def test_requires_weight_source(self, client):
        resp = client.post(
            "/compare",
            json={"labels": LABELS, "predictions": [MODEL_A, MODEL_B]},
        )
        assert resp.status_code == 422
        assert "weight" in resp.json()["detail"]

    def test_needs_two_models(self, client):
        resp = client.post(
            "/compare",
            json={"labels": LABELS, "predictions": [MODEL_A], "weights": [1.0]},
        )
        assert resp.status_code == 422  # pydantic min_length


class TestSimulate:
    def test_spec_simulation_deterministic(self, client):
        payload = {
            "n_class0": 5,
            "n_class1": 5,
            "models": [{"recall0": 0.8, "recall1": 1.0}],
            "seed": 12,
        }
        a = client.post("/simulate", json=payload).json()
        b = client.post("/simulate", json=payload).json()
        assert a == b
        assert a["prediction_files"][0]["model_id"] == "m1"
        assert a["manifest"]["generator"] == "mt19937-v1"

    def test_preset(self, client):
        body = client.post("/simulate", json={"preset": "breakhis"}).json()
        assert len(body["prediction_files"]) == 3
        assert "372" in body["provenance"]
        names = [p["filename"] for p in body["prediction_files"]]
        assert names == [
            "predictions_resnet50.csv",
            "predictions_inceptionv3.csv",
            "predictions_densenet201.csv",
        ]

    def test_preset_conflicts_with_spec_fields(self, client):
        resp = client.post("/simulate", json={"preset": "breakhis", "n_class0": 5})
        assert resp.status_code == 422
        assert resp.json()["error"] == "simulation"

    def test_incomplete_spec(self, client):
        resp = client.post("/simulate", json={"n_class0": 5})
        assert resp.status_code == 422
