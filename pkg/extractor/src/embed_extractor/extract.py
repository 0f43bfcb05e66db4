"""Run an extraction job and write its vectors as JSON lines."""

from __future__ import annotations

import json
import os
import tempfile
import warnings

import numpy as np

from .backends import load_backend
from .job import ExtractionJob


def _write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".jsonl")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def extract(job: ExtractionJob) -> tuple[int, int]:
    """Encode every sentence in the job and write one JSON object per line:
    {"id": ..., "vector": [...]}. Returns (sentence count, vector dimension).

    Output order follows input order regardless of batching. Sentences with
    empty text get a zero vector and a warning rather than an error.
    """
    backend = load_backend(job.model, job.pooling, max_length=job.max_length)
    dimension = backend.dimension

    vectors: dict[int, np.ndarray] = {}
    pending: list[tuple[int, str]] = []
    for position, sentence in enumerate(job.sentences):
        if sentence.text:
            pending.append((position, sentence.text))
        else:
            warnings.warn(
                f"sentence {sentence.id!r} has empty text; writing a zero vector",
                stacklevel=2,
            )
            vectors[position] = np.zeros(dimension, dtype=np.float64)

    for start in range(0, len(pending), job.batch_size):
        chunk = pending[start : start + job.batch_size]
        encoded = backend.encode([text for _, text in chunk], job.pooling)
        for (position, _), row in zip(chunk, encoded):
            vectors[position] = row

    lines = []
    for position, sentence in enumerate(job.sentences):
        row = {"id": sentence.id, "vector": [float(v) for v in vectors[position]]}
        lines.append(json.dumps(row))
    _write_atomic(job.out, "\n".join(lines) + "\n")
    return len(job.sentences), dimension
