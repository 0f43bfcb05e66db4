import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from polann.corpus import Corpus, Lexicon, Sentence, Token
from polann.errors import ValidationError
from polann.polarity import (
    LABELS,
    CentroidSet,
    PolarityCoordinate,
    SentimentLabel,
    annotate_pc,
    classify_pc,
    confidence,
    label_distribution,
    polarity_coordinate,
    score_sentence,
)


def _sentence(*forms, sid="s"):
    return Sentence(id=sid, tokens=tuple(Token(form=f, lemma=f) for f in forms))


def _corpus(sentences):
    return Corpus(sentences=tuple(sentences))


def brute_force_classify(coordinate, centroids):
    """Independent nearest-centroid oracle with the same tie policy."""
    distances = {
        label: math.dist(
            (coordinate.polarity, coordinate.intensity),
            (centroids[label].polarity, centroids[label].intensity),
        )
        for label in LABELS
    }
    best = min(distances.values())
    tied = [label for label in LABELS if distances[label] == best]
    if SentimentLabel.NEUTRAL in tied:
        return SentimentLabel.NEUTRAL
    return tied[0]


class TestSentimentLabel:
    def test_canonical_order(self):
        assert [int(label) for label in LABELS] == [0, 1, 2, 3]
        assert [str(label) for label in LABELS] == ["positive", "negative", "neutral", "mixed"]

    def test_parse_round_trip(self):
        for label in LABELS:
            assert SentimentLabel.parse(str(label)) is label
        assert SentimentLabel.parse("  Positive ") is SentimentLabel.POSITIVE

    def test_parse_unknown(self):
        with pytest.raises(ValidationError):
            SentimentLabel.parse("ambivalent")


class TestPolarityCoordinate:
    def test_single_positive_score(self):
        assert polarity_coordinate([1.0]) == PolarityCoordinate(1.0, 1.0)

    def test_symmetric_cancellation(self):
        assert polarity_coordinate([0.5, -0.5]) == PolarityCoordinate(0.5, 0.5)

    def test_negative_pair(self):
        coordinate = polarity_coordinate([-0.5, -1.0])
        assert coordinate.polarity == pytest.approx(0.125, abs=1e-9)
        assert coordinate.intensity == pytest.approx(0.75, abs=1e-9)

    def test_empty_scores_error(self):
        with pytest.raises(ValidationError):
            polarity_coordinate([])

    def test_out_of_range_score_error(self):
        with pytest.raises(ValidationError):
            polarity_coordinate([1.2])

    @given(st.lists(st.floats(min_value=-1.0, max_value=1.0), min_size=1, max_size=40))
    def test_bounds_and_triangle_property(self, scores):
        coordinate = polarity_coordinate(scores)
        assert 0.0 <= coordinate.polarity <= 1.0
        assert 0.0 <= coordinate.intensity <= 1.0
        # |mean(s)| <= mean(|s|) rewritten in plane coordinates
        assert coordinate.intensity >= abs(2.0 * coordinate.polarity - 1.0) - 1e-12

    def test_coordinate_validates_range(self):
        with pytest.raises(ValidationError):
            PolarityCoordinate(1.1, 0.0)


class TestCentroidSet:
    def test_default_layout(self):
        centroids = CentroidSet.default()
        assert centroids[SentimentLabel.POSITIVE] == PolarityCoordinate(1.0, 0.5)
        assert centroids[SentimentLabel.NEGATIVE] == PolarityCoordinate(0.0, 0.5)
        assert centroids[SentimentLabel.NEUTRAL] == PolarityCoordinate(0.5, 0.0)
        assert centroids[SentimentLabel.MIXED] == PolarityCoordinate(0.5, 1.0)

    def test_equidistance_enforced(self):
        with pytest.raises(ValidationError):
            CentroidSet(
                coordinates={
                    SentimentLabel.POSITIVE: PolarityCoordinate(0.9, 0.5),
                    SentimentLabel.NEGATIVE: PolarityCoordinate(0.0, 0.5),
                    SentimentLabel.NEUTRAL: PolarityCoordinate(0.5, 0.0),
                    SentimentLabel.MIXED: PolarityCoordinate(0.5, 1.0),
                }
            )

    def test_all_four_required(self):
        with pytest.raises(ValidationError):
            CentroidSet(coordinates={SentimentLabel.POSITIVE: PolarityCoordinate(1.0, 0.5)})


class TestClassifyPc:
    centroids = CentroidSet.default()

    def test_centroid_hit(self):
        label, distances = classify_pc(PolarityCoordinate(1.0, 0.5), self.centroids)
        assert label is SentimentLabel.POSITIVE
        assert distances[SentimentLabel.POSITIVE] == 0.0

    def test_negative_region(self):
        label, distances = classify_pc(PolarityCoordinate(0.125, 0.75), self.centroids)
        assert label is SentimentLabel.NEGATIVE
        assert distances[SentimentLabel.NEGATIVE] == pytest.approx(0.2795, abs=1e-4)
        assert distances[SentimentLabel.MIXED] == pytest.approx(0.4507, abs=1e-4)

    def test_corner_tie_breaks_by_index(self):
        label, _ = classify_pc(PolarityCoordinate(1.0, 1.0), self.centroids)
        assert label is SentimentLabel.POSITIVE

    def test_center_tie_prefers_neutral(self):
        label, distances = classify_pc(PolarityCoordinate(0.5, 0.5), self.centroids)
        assert label is SentimentLabel.NEUTRAL
        assert len(set(distances.values())) == 1

    def test_matches_brute_force_oracle(self):
        rng = np.random.default_rng(1234)
        for _ in range(10_000):
            coordinate = PolarityCoordinate(float(rng.random()), float(rng.random()))
            label, _ = classify_pc(coordinate, self.centroids)
            assert label is brute_force_classify(coordinate, self.centroids)


class TestConfidence:
    centroids = CentroidSet.default()

    def _distances(self, coordinate):
        return classify_pc(coordinate, self.centroids)[1]

    def test_center_gives_zero(self):
        assert confidence(self._distances(PolarityCoordinate(0.5, 0.5))) == pytest.approx(0.0)

    def test_hand_value_two_thirds(self):
        alpha = confidence(self._distances(PolarityCoordinate(0.75, 0.5)))
        assert alpha == pytest.approx(2.0 / 3.0, abs=1e-9)

    def test_on_centroid_gives_one(self):
        assert confidence(self._distances(PolarityCoordinate(1.0, 0.5))) == pytest.approx(1.0)

    def test_scale_invariant(self):
        distances = self._distances(PolarityCoordinate(0.3, 0.8))
        scaled = {k: 7.5 * v for k, v in distances.items()}
        assert confidence(scaled) == pytest.approx(confidence(distances), abs=1e-12)

    def test_all_zero_distances_rejected(self):
        with pytest.raises(ValidationError):
            confidence({label: 0.0 for label in LABELS})


class TestAnnotatePc:
    lexicon = Lexicon(entries={"bonus": 1.0, "malus": -1.0})

    def test_no_match_deemed_neutral(self):
        annotations = annotate_pc(_corpus([_sentence("et", "sed")]), self.lexicon)
        only = annotations[0]
        assert only.label is SentimentLabel.NEUTRAL
        assert only.alpha == 1.0
        assert only.coordinate == PolarityCoordinate(0.5, 0.0)
        assert only.matched_count == 0

    def test_single_positive_token(self):
        annotations = annotate_pc(_corpus([_sentence("bonus")]), self.lexicon)
        only = annotations[0]
        assert only.label is SentimentLabel.POSITIVE
        assert only.alpha == pytest.approx(1.0 - 0.5 / math.sqrt(1.25), abs=1e-9)
        assert only.coordinate == PolarityCoordinate(1.0, 1.0)
        assert only.matched_count == 1

    def test_identical_sentences_identical_annotations(self):
        corpus = _corpus([_sentence("bonus", sid="a"), _sentence("bonus", sid="b")])
        first, second = annotate_pc(corpus, self.lexicon)
        assert (first.label, first.alpha, first.coordinate) == (
            second.label,
            second.alpha,
            second.coordinate,
        )

    def test_output_order_is_corpus_order(self):
        corpus = _corpus([_sentence("malus", sid=f"s{i}") for i in range(25)])
        annotations = annotate_pc(corpus, self.lexicon)
        assert [a.sentence_id for a in annotations] == [f"s{i}" for i in range(25)]

    def test_sign_property(self):
        rng = np.random.default_rng(7)
        entries = {f"w{i}": float(s) for i, s in enumerate(rng.uniform(0.05, 1.0, size=50))}
        lexicon = Lexicon(entries=dict(entries))
        sentences = [
            _sentence(*rng.choice(list(entries), size=5), sid=f"s{i}") for i in range(50)
        ]
        for annotation in annotate_pc(_corpus(sentences), lexicon):
            assert annotation.label is not SentimentLabel.NEGATIVE

    def test_score_sentence_filters(self):
        scores = score_sentence(_sentence("bonus", "et", "malus"), self.lexicon)
        assert scores == [1.0, -1.0]
        assert score_sentence(_sentence("et", "sed"), self.lexicon) == []

    def test_repeated_token_scores_repeat(self):
        lexicon = Lexicon(entries={"ferrum": -0.75})
        assert score_sentence(_sentence("ferrum", "ferrum"), lexicon) == [-0.75, -0.75]


class TestLabelDistribution:
    def test_counts_all_classes(self):
        annotations = annotate_pc(
            _corpus([_sentence("bonus", sid="a"), _sentence("et", sid="b")]),
            Lexicon(entries={"bonus": 1.0}),
        )
        dist = label_distribution(annotations)
        assert dist[SentimentLabel.POSITIVE] == 1
        assert dist[SentimentLabel.NEUTRAL] == 1
        assert dist[SentimentLabel.MIXED] == 0
        assert sum(dist.values()) == 2
