"""Sentence-embedding storage and feature assembly for mixture fitting."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import ParseError, ValidationError
from .polarity import PcAnnotation

# Significant digits used when serializing vectors; enough for an exact
# round-trip of 64-bit floats.
FLOAT_DIGITS = 17


@dataclass(frozen=True)
class EmbeddingStore:
    """Validated id -> vector map; every vector shares one dimension."""

    dimension: int
    records: Mapping[str, np.ndarray]

    def __post_init__(self):
        if self.dimension <= 0:
            raise ValidationError("embedding dimension must be positive")

    def __len__(self) -> int:
        return len(self.records)

    def __contains__(self, sentence_id: str) -> bool:
        return sentence_id in self.records

    def ids(self) -> list[str]:
        return list(self.records)

    def vector(self, sentence_id: str) -> np.ndarray:
        return self.records[sentence_id]


def load_embeddings(data) -> EmbeddingStore:
    """Load JSON-lines embeddings: {"id": <text>, "vector": [<real>, ...]}."""
    if hasattr(data, "read"):
        data = data.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    records: dict[str, np.ndarray] = {}
    dimension = None
    for line_no, line in enumerate(data.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", line=line_no) from exc
        if not isinstance(obj, dict) or "id" not in obj or "vector" not in obj:
            raise ParseError('expected {"id": ..., "vector": [...]}', line=line_no)
        sentence_id = obj["id"]
        vector = obj["vector"]
        if not isinstance(sentence_id, str) or not sentence_id:
            raise ParseError("id must be a non-empty string", line=line_no)
        if not isinstance(vector, list) or not vector:
            raise ParseError(f"vector for {sentence_id!r} must be a non-empty list", line=line_no)
        if sentence_id in records:
            raise ParseError(f"duplicate embedding id {sentence_id!r}", line=line_no)
        if any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in vector):
            raise ParseError(f"vector for {sentence_id!r} must be flat and numeric", line=line_no)
        values = np.asarray(vector, dtype=np.float64)
        if not np.all(np.isfinite(values)):
            raise ParseError(f"non-finite value in vector for {sentence_id!r}", line=line_no)
        if dimension is None:
            dimension = values.shape[0]
        elif values.shape[0] != dimension:
            raise ParseError(
                f"vector for {sentence_id!r} has dimension {values.shape[0]}, expected {dimension}",
                line=line_no,
            )
        values.setflags(write=False)
        records[sentence_id] = values
    if dimension is None:
        raise ParseError("embedding input contains no records")
    return EmbeddingStore(dimension=dimension, records=records)


def format_vector_value(value: float) -> str:
    if not math.isfinite(value):
        raise ValidationError(f"cannot serialize non-finite value {value}")
    return format(float(value), f".{FLOAT_DIGITS}g")


def embedding_line(sentence_id: str, vector) -> str:
    rendered = ", ".join(format_vector_value(v) for v in vector)
    return f'{{"id": {json.dumps(sentence_id)}, "vector": [{rendered}]}}'


def save_embeddings(store: EmbeddingStore, stream) -> None:
    """Write a store as JSON-lines with 17-significant-digit floats."""
    for sentence_id in store.records:
        stream.write(embedding_line(sentence_id, store.records[sentence_id]))
        stream.write("\n")


def standardize_features(
    features, mean: np.ndarray | None = None, std: np.ndarray | None = None
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Column-wise z-scores, returning the transform alongside the result.

    With mean/std omitted they are computed from the data; constant
    columns get divisor 1 so they come out centered at zero.  Passing a
    stored mean/std applies a fit-time transform to new features.
    """
    X = np.asarray(features, dtype=np.float64)
    if X.ndim != 2:
        raise ValidationError("features must be a 2-D matrix")
    if mean is None:
        if X.shape[0] == 0:
            raise ValidationError("cannot fit a scaler on zero rows")
        mean = X.mean(axis=0)
        std = X.std(axis=0)
        std = np.where(std > 0.0, std, 1.0)
    else:
        mean = np.asarray(mean, dtype=np.float64)
        std = np.asarray(std, dtype=np.float64)
        if mean.shape != (X.shape[1],) or std.shape != (X.shape[1],):
            raise ValidationError(
                f"scaler dimension does not match features ({X.shape[1]} columns)"
            )
        if np.any(std <= 0.0):
            raise ValidationError("scaler std entries must be positive")
    return (X - mean) / std, mean, std


def build_features(store: EmbeddingStore, annotations: Sequence[PcAnnotation]) -> np.ndarray:
    """Stack embedding vectors with the two appended coordinate features.

    Row i is the embedding for annotation i followed by its polarity and
    intensity; the result has annotation-count rows and dimension + 2
    columns.
    """
    missing = [a.sentence_id for a in annotations if a.sentence_id not in store.records]
    if missing:
        shown = ", ".join(repr(m) for m in missing[:10])
        more = "" if len(missing) <= 10 else f" (+{len(missing) - 10} more)"
        raise ValidationError(f"embeddings missing for ids: {shown}{more}")
    features = np.empty((len(annotations), store.dimension + 2), dtype=np.float64)
    for i, annotation in enumerate(annotations):
        features[i, : store.dimension] = store.records[annotation.sentence_id]
        features[i, store.dimension] = annotation.coordinate.polarity
        features[i, store.dimension + 1] = annotation.coordinate.intensity
    return features
