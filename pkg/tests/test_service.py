import math

import pytest
from fastapi.testclient import TestClient

from polann.service.app import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def labeled(pairs):
    return [{"id": i, "label": label} for i, label in pairs]


class TestHealth:
    def test_ok(self, client):
        response = client.get("/health")
        assert response.status_code == 200
        assert response.json() == {"status": "ok"}


class TestAnnotatePc:
    def request_body(self, **overrides):
        body = {
            "sentences": [
                {"id": "s1", "tokens": [{"form": "laetus"}, {"form": "gaudium"}]},
                {"id": "s2", "tokens": [{"form": "ignotum"}]},
            ],
            "lexicon": {"laetus": 1.0, "gaudium": 0.5},
        }
        body.update(overrides)
        return body

    def test_annotates_and_counts(self, client):
        response = client.post("/annotate/pc", json=self.request_body())
        assert response.status_code == 200
        data = response.json()
        first, second = data["annotations"]
        assert first["label"] == "positive"
        assert first["matched_count"] == 2
        assert first["polarity"] == pytest.approx(0.875)
        assert second["label"] == "neutral"
        assert second["alpha"] == 1.0
        assert data["distribution"] == {
            "positive": 1, "negative": 0, "neutral": 1, "mixed": 0,
        }

    def test_lexicon_keys_are_case_insensitive(self, client):
        body = self.request_body(lexicon={"LAETUS": 1.0, "gaudium": 0.5})
        response = client.post("/annotate/pc", json=body)
        assert response.json()["annotations"][0]["matched_count"] == 2

    def test_custom_centroids(self, client):
        # swap the positive and mixed anchors; equidistance from the plane
        # centre is preserved, and the sample sentence now lands on mixed
        body = self.request_body(centroids={
            "positive": [0.5, 1.0],
            "negative": [0.0, 0.5],
            "neutral": [0.5, 0.0],
            "mixed": [1.0, 0.5],
        })
        response = client.post("/annotate/pc", json=body)
        assert response.status_code == 200
        assert response.json()["annotations"][0]["label"] == "mixed"

    def test_lopsided_centroids_rejected(self, client):
        body = self.request_body(centroids={
            "positive": [1.0, 0.0],
            "negative": [0.0, 0.5],
            "neutral": [0.5, 0.0],
            "mixed": [0.875, 0.75],
        })
        response = client.post("/annotate/pc", json=body)
        assert response.status_code == 422
        assert "equidistant" in response.json()["detail"]

    def test_incomplete_centroids_rejected(self, client):
        body = self.request_body(centroids={"positive": [1.0, 0.5]})
        response = client.post("/annotate/pc", json=body)
        assert response.status_code == 422

    def test_score_outside_range_rejected(self, client):
        body = self.request_body(lexicon={"laetus": 2.0})
        response = client.post("/annotate/pc", json=body)
        assert response.status_code == 422
        assert "outside" in response.json()["detail"]

    def test_empty_sentences_rejected(self, client):
        response = client.post("/annotate/pc", json=self.request_body(sentences=[]))
        assert response.status_code == 422

    def test_empty_tokens_rejected(self, client):
        body = self.request_body(sentences=[{"id": "s1", "tokens": []}])
        response = client.post("/annotate/pc", json=body)
        assert response.status_code == 422


class TestClassifyPc:
    def test_negative_quadrant(self, client):
        response = client.post("/classify/pc", json={"polarity": 0.125, "intensity": 0.75})
        assert response.status_code == 200
        data = response.json()
        assert data["label"] == "negative"
        assert set(data["distances"]) == {"positive", "negative", "neutral", "mixed"}
        assert 0.0 <= data["alpha"] <= 1.0

    def test_exact_centroid_has_full_confidence(self, client):
        response = client.post("/classify/pc", json={"polarity": 1.0, "intensity": 0.5})
        data = response.json()
        assert data["label"] == "positive"
        assert data["alpha"] == 1.0
        assert data["distances"]["positive"] == 0.0

    def test_coordinate_bounds_enforced(self, client):
        response = client.post("/classify/pc", json={"polarity": 1.5, "intensity": 0.0})
        assert response.status_code == 422


class TestSplit:
    def test_partition(self, client):
        ids = [f"s{i}" for i in range(10)]
        response = client.post("/split", json={"ids": ids, "seed": 4})
        assert response.status_code == 200
        data = response.json()
        assert len(data["train"]) == 8
        assert len(data["validation"]) == 1
        assert len(data["test"]) == 1
        assert sorted(data["train"] + data["validation"] + data["test"]) == sorted(ids)

    def test_deterministic_per_seed(self, client):
        ids = [f"s{i}" for i in range(12)]
        first = client.post("/split", json={"ids": ids, "seed": 9}).json()
        second = client.post("/split", json={"ids": ids, "seed": 9}).json()
        assert first == second

    def test_duplicate_ids_rejected(self, client):
        response = client.post("/split", json={"ids": ["a", "a", "b"], "seed": 0})
        assert response.status_code == 422
        assert "distinct" in response.json()["detail"]

    def test_too_few_ids_rejected(self, client):
        response = client.post("/split", json={"ids": ["a", "b"], "seed": 0})
        assert response.status_code == 422


class TestEvaluate:
    GOLD = labeled([("a", "positive"), ("b", "positive"), ("c", "negative"), ("d", "mixed")])
    PRED = labeled([("a", "positive"), ("b", "negative"), ("c", "negative"), ("d", "mixed")])

    def test_metrics_body(self, client):
        response = client.post("/evaluate", json={"gold": self.GOLD, "predicted": self.PRED})
        assert response.status_code == 200
        data = response.json()
        assert data["macro_f1"] == pytest.approx(7 / 12)
        assert data["micro_f1"] == pytest.approx(0.75)
        assert data["f1"]["positive"] == pytest.approx(2 / 3)
        assert data["support"] == {"positive": 2, "negative": 1, "neutral": 0, "mixed": 1}
        assert data["confusion"][0] == [1, 1, 0, 0]
        assert data["grouped"] is None

    def test_grouped_scores(self, client):
        groups = {"a": "g1", "b": "g1", "c": "g2", "d": "g2"}
        response = client.post(
            "/evaluate", json={"gold": self.GOLD, "predicted": self.PRED, "groups": groups}
        )
        data = response.json()
        assert set(data["grouped"]) == {"g1", "g2"}
        assert data["grouped_mean"] == pytest.approx(
            (data["grouped"]["g1"] + data["grouped"]["g2"]) / 2
        )

    def test_missing_group_rejected(self, client):
        response = client.post(
            "/evaluate",
            json={"gold": self.GOLD, "predicted": self.PRED, "groups": {"a": "g1"}},
        )
        assert response.status_code == 422
        assert "no group" in response.json()["detail"]

    def test_mismatched_ids_rejected(self, client):
        response = client.post(
            "/evaluate", json={"gold": self.GOLD, "predicted": self.PRED[:3]}
        )
        assert response.status_code == 422
        assert "missing from predictions" in response.json()["detail"]

    def test_unknown_label_rejected(self, client):
        response = client.post(
            "/evaluate",
            json={"gold": labeled([("a", "joyful")]), "predicted": labeled([("a", "positive")])},
        )
        assert response.status_code == 422

    def test_only_present_flag(self, client):
        gold = labeled([("a", "positive"), ("b", "positive")])
        response = client.post(
            "/evaluate", json={"gold": gold, "predicted": gold, "only_present": True}
        )
        assert response.json()["macro_f1"] == 1.0


class TestAgreement:
    def test_perfect_agreement(self, client):
        rows = labeled([("a", "positive"), ("b", "negative")])
        response = client.post("/agreement", json={"a": rows, "b": rows})
        assert response.status_code == 200
        assert response.json() == {"kappa": 1.0}

    def test_known_kappa(self, client):
        a = labeled([("1", "positive"), ("2", "positive"), ("3", "negative"), ("4", "negative")])
        b = labeled([("1", "positive"), ("2", "negative"), ("3", "negative"), ("4", "negative")])
        response = client.post("/agreement", json={"a": a, "b": b})
        assert response.json()["kappa"] == pytest.approx(0.5)

    def test_alignment_errors_are_422(self, client):
        response = client.post(
            "/agreement",
            json={"a": labeled([("1", "positive")]), "b": labeled([("2", "positive")])},
        )
        assert response.status_code == 422
