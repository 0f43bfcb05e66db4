"""Polarity-coordinate clustering.

Sentences are scored against a sentiment lexicon and mapped onto a
two-dimensional plane: the x axis is polarity (displeasing to pleasing)
and the y axis is intensity (inert to aroused), both in [0, 1].  Each of
the four classes owns a fixed centroid equidistant from the plane centre
(0.5, 0.5); a sentence takes the label of its nearest centroid, plus a
confidence value derived from the normalized centroid distances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from typing import Mapping

from .corpus import Corpus, Lexicon, Sentence, lookup_score
from .errors import ValidationError

_PLANE_CENTRE = (0.5, 0.5)
_EQUIDISTANCE_TOL = 1e-9


class SentimentLabel(IntEnum):
    """Four-way emotion polarity label; the integer value is the class index."""

    POSITIVE = 0
    NEGATIVE = 1
    NEUTRAL = 2
    MIXED = 3

    def __str__(self) -> str:
        return self.name.lower()

    @classmethod
    def parse(cls, text: str) -> "SentimentLabel":
        try:
            return cls[text.strip().upper()]
        except KeyError:
            raise ValidationError(f"unknown sentiment label {text!r}") from None


LABELS: tuple[SentimentLabel, ...] = tuple(SentimentLabel)


@dataclass(frozen=True)
class PolarityCoordinate:
    """A (polarity, intensity) point, both coordinates within [0, 1]."""

    polarity: float
    intensity: float

    def __post_init__(self):
        for name, value in (("polarity", self.polarity), ("intensity", self.intensity)):
            if not 0.0 <= value <= 1.0:
                raise ValidationError(f"{name} {value} outside [0, 1]")

    def distance(self, other: "PolarityCoordinate") -> float:
        return math.hypot(self.polarity - other.polarity, self.intensity - other.intensity)


@dataclass(frozen=True)
class CentroidSet:
    """One centroid per label, all equidistant from the plane centre."""

    coordinates: Mapping[SentimentLabel, PolarityCoordinate]

    def __post_init__(self):
        missing = [label for label in LABELS if label not in self.coordinates]
        if missing:
            raise ValidationError(f"missing centroids for {[str(m) for m in missing]}")
        centre = PolarityCoordinate(*_PLANE_CENTRE)
        radii = [self.coordinates[label].distance(centre) for label in LABELS]
        if max(radii) - min(radii) > _EQUIDISTANCE_TOL:
            raise ValidationError("centroids are not equidistant from the plane centre")
        points = {
            (self.coordinates[label].polarity, self.coordinates[label].intensity)
            for label in LABELS
        }
        if len(points) != len(LABELS):
            raise ValidationError("centroids must be pairwise distinct")

    def __getitem__(self, label: SentimentLabel) -> PolarityCoordinate:
        return self.coordinates[label]

    @classmethod
    def default(cls) -> "CentroidSet":
        """Positive right, negative left, mixed top, neutral bottom."""
        return cls(
            coordinates={
                SentimentLabel.POSITIVE: PolarityCoordinate(1.0, 0.5),
                SentimentLabel.NEGATIVE: PolarityCoordinate(0.0, 0.5),
                SentimentLabel.NEUTRAL: PolarityCoordinate(0.5, 0.0),
                SentimentLabel.MIXED: PolarityCoordinate(0.5, 1.0),
            }
        )


@dataclass(frozen=True)
class PcAnnotation:
    """Nearest-centroid label for one sentence plus its confidence."""

    sentence_id: str
    label: SentimentLabel
    coordinate: PolarityCoordinate
    alpha: float
    matched_count: int

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValidationError(f"alpha {self.alpha} outside [0, 1]")
        if self.matched_count < 0:
            raise ValidationError("matched_count must be non-negative")


def score_sentence(sentence: Sentence, lexicon: Lexicon) -> list[float]:
    """Scores of exactly the tokens found in the lexicon, in token order."""
    scores = []
    for token in sentence.tokens:
        score = lookup_score(lexicon, token)
        if score is not None:
            scores.append(score)
    return scores


def polarity_coordinate(scores: list[float]) -> PolarityCoordinate:
    """Map a non-empty score list onto the plane.

    polarity  = (1 / 2n) * sum(s_i) + 1/2
    intensity = (1 / n) * sum(|s_i|)

    Both outputs land in [0, 1] whenever every s_i is within [-1, 1].
    """
    if not scores:
        raise ValidationError("cannot compute a coordinate from an empty score list")
    for score in scores:
        if not -1.0 <= score <= 1.0:
            raise ValidationError(f"score {score} outside [-1, 1]")
    n = len(scores)
    polarity = 0.5 * (math.fsum(scores) / n) + 0.5
    intensity = math.fsum(abs(s) for s in scores) / n
    return PolarityCoordinate(polarity, intensity)


def classify_pc(
    coordinate: PolarityCoordinate, centroids: CentroidSet
) -> tuple[SentimentLabel, dict[SentimentLabel, float]]:
    """Nearest centroid by Euclidean distance.

    Ties go to neutral whenever it participates, otherwise to the tied
    label with the lowest class index.
    """
    distances = {label: coordinate.distance(centroids[label]) for label in LABELS}
    best = min(distances.values())
    tied = [label for label in LABELS if distances[label] == best]
    if len(tied) > 1 and SentimentLabel.NEUTRAL in tied:
        return SentimentLabel.NEUTRAL, distances
    return tied[0], distances


def confidence(distances: Mapping[SentimentLabel, float]) -> float:
    """1 minus the smallest max-normalized centroid distance.

    Equals 1 exactly on a centroid and 0 when all distances agree (the
    plane centre); invariant under uniform positive scaling.
    """
    d_max = max(distances.values())
    if d_max <= 0.0:
        raise ValidationError("confidence requires at least one positive distance")
    return 1.0 - min(distances.values()) / d_max


def annotate_pc(
    corpus: Corpus, lexicon: Lexicon, centroids: CentroidSet | None = None
) -> list[PcAnnotation]:
    """Annotate every sentence; sentences with no lexicon matches are neutral.

    Unmatched sentences sit on the neutral centroid with alpha 1.0 (a hard
    assignment, not a distance-derived one).
    """
    if centroids is None:
        centroids = CentroidSet.default()
    annotations = []
    for sentence in corpus:
        scores = score_sentence(sentence, lexicon)
        if not scores:
            annotations.append(
                PcAnnotation(
                    sentence_id=sentence.id,
                    label=SentimentLabel.NEUTRAL,
                    coordinate=centroids[SentimentLabel.NEUTRAL],
                    alpha=1.0,
                    matched_count=0,
                )
            )
            continue
        coordinate = polarity_coordinate(scores)
        label, distances = classify_pc(coordinate, centroids)
        annotations.append(
            PcAnnotation(
                sentence_id=sentence.id,
                label=label,
                coordinate=coordinate,
                alpha=confidence(distances),
                matched_count=len(scores),
            )
        )
    return annotations


def label_distribution(labels) -> dict[SentimentLabel, int]:
    """Count annotations (or raw labels) per class, in canonical order."""
    counts = {label: 0 for label in LABELS}
    for item in labels:
        label = item.label if isinstance(item, PcAnnotation) else item
        counts[label] += 1
    return counts
