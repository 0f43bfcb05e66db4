import io
import json

import numpy as np
import pytest

from polann.errors import ParseError, ValidationError
from polann.polarity import PcAnnotation, PolarityCoordinate, SentimentLabel
from polann.vectors import (
    EmbeddingStore,
    build_features,
    format_vector_value,
    load_embeddings,
    save_embeddings,
    standardize_features,
)


def _jsonl(*records):
    return "\n".join(json.dumps(r) for r in records) + "\n"


def _annotation(sid, polarity, intensity):
    return PcAnnotation(
        sentence_id=sid,
        label=SentimentLabel.NEUTRAL,
        coordinate=PolarityCoordinate(polarity, intensity),
        alpha=1.0,
        matched_count=0,
    )


class TestLoadEmbeddings:
    def test_two_records(self):
        store = load_embeddings(_jsonl({"id": "a", "vector": [1, 2, 3]},
                                       {"id": "b", "vector": [4, 5, 6]}))
        assert store.dimension == 3
        assert len(store) == 2
        np.testing.assert_array_equal(store.vector("b"), [4.0, 5.0, 6.0])

    def test_dimension_mismatch_names_id(self):
        text = _jsonl({"id": "a", "vector": [1, 2, 3]}, {"id": "bad", "vector": [1, 2]})
        with pytest.raises(ParseError, match="bad"):
            load_embeddings(text)

    def test_duplicate_id(self):
        text = _jsonl({"id": "a", "vector": [1]}, {"id": "a", "vector": [2]})
        with pytest.raises(ParseError, match="duplicate"):
            load_embeddings(text)

    def test_non_finite_value(self):
        with pytest.raises(ParseError):
            load_embeddings('{"id": "a", "vector": [1e999]}\n')

    def test_non_numeric_entry(self):
        with pytest.raises(ParseError):
            load_embeddings('{"id": "a", "vector": ["x"]}\n')

    def test_boolean_entry_rejected(self):
        with pytest.raises(ParseError):
            load_embeddings('{"id": "a", "vector": [true]}\n')

    def test_invalid_json_reports_line(self):
        text = _jsonl({"id": "a", "vector": [1]}) + "{not json}\n"
        with pytest.raises(ParseError, match="line 2"):
            load_embeddings(text)

    def test_empty_input_rejected(self):
        with pytest.raises(ParseError):
            load_embeddings("")

    def test_vectors_read_only(self):
        store = load_embeddings(_jsonl({"id": "a", "vector": [1.0]}))
        with pytest.raises(ValueError):
            store.vector("a")[0] = 2.0


class TestRoundTrip:
    def test_save_load_bit_exact(self):
        rng = np.random.default_rng(3)
        records = [
            {"id": f"s{i}", "vector": [float(v) for v in rng.normal(size=7)]}
            for i in range(20)
        ]
        store = load_embeddings(_jsonl(*records))
        buffer = io.StringIO()
        save_embeddings(store, buffer)
        again = load_embeddings(buffer.getvalue())
        assert again.ids() == store.ids()
        for sid in store.ids():
            np.testing.assert_array_equal(again.vector(sid), store.vector(sid))

    def test_seventeen_digit_serialization(self):
        value = 0.1 + 0.2  # not representable exactly; needs 17 digits
        assert float(format_vector_value(value)) == value

    def test_format_rejects_non_finite(self):
        with pytest.raises(ValidationError):
            format_vector_value(float("nan"))


class TestBuildFeatures:
    store = load_embeddings(_jsonl({"id": "a", "vector": [0.1, 0.2]},
                                   {"id": "b", "vector": [0.3, 0.4]}))

    def test_appends_coordinates(self):
        features = build_features(self.store, [_annotation("a", 0.75, 0.5)])
        np.testing.assert_allclose(features, [[0.1, 0.2, 0.75, 0.5]])

    def test_empty_annotations(self):
        features = build_features(self.store, [])
        assert features.shape == (0, 4)

    def test_row_order_follows_annotations(self):
        features = build_features(
            self.store, [_annotation("b", 0.0, 0.0), _annotation("a", 1.0, 1.0)]
        )
        np.testing.assert_allclose(features[:, 0], [0.3, 0.1])

    def test_missing_ids_listed(self):
        with pytest.raises(ValidationError, match="ghost"):
            build_features(self.store, [_annotation("ghost", 0.5, 0.5)])

    def test_width_is_dimension_plus_two(self):
        rng = np.random.default_rng(0)
        records = [{"id": f"s{i}", "vector": [float(v) for v in rng.normal(size=16)]}
                   for i in range(5)]
        store = load_embeddings(_jsonl(*records))
        annotations = [_annotation(f"s{i}", 0.5, 0.5) for i in range(5)]
        assert build_features(store, annotations).shape == (5, 18)


class TestStandardize:
    def test_zero_mean_unit_std(self):
        rng = np.random.default_rng(5)
        X = rng.normal(3.0, 2.0, size=(200, 4))
        scaled, mean, std = standardize_features(X)
        np.testing.assert_allclose(scaled.mean(axis=0), 0.0, atol=1e-12)
        np.testing.assert_allclose(scaled.std(axis=0), 1.0, atol=1e-12)
        np.testing.assert_allclose(mean, X.mean(axis=0))

    def test_constant_column_left_at_zero(self):
        X = np.array([[1.0, 5.0], [2.0, 5.0]])
        scaled, _, std = standardize_features(X)
        np.testing.assert_allclose(scaled[:, 1], 0.0)
        assert std[1] == 1.0

    def test_stored_transform_applied(self):
        X = np.array([[0.0, 10.0], [2.0, 14.0]])
        _, mean, std = standardize_features(X)
        scaled, _, _ = standardize_features(np.array([[1.0, 12.0]]), mean=mean, std=std)
        np.testing.assert_allclose(scaled, [[0.0, 0.0]])

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValidationError):
            standardize_features(np.ones((2, 3)), mean=np.zeros(2), std=np.ones(2))


class TestEmbeddingStore:
    def test_contains_and_ids(self):
        store = EmbeddingStore(dimension=1, records={"a": np.array([1.0])})
        assert "a" in store and "b" not in store
        assert store.ids() == ["a"]
