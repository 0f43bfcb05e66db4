"""Sentence vector extraction from transformer checkpoints.

Writes the JSON-lines format consumed by the annotation toolkit's
embedding loaders: one {"id": ..., "vector": [...]} object per line.
"""

from .errors import ExtractorError, InputError, ModelError, ValidationError
from .extract import extract
from .inputs import read_sentences
from .job import DEFAULT_POOLING, POOLING_MODES, ExtractionJob, SentenceText

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_POOLING",
    "POOLING_MODES",
    "ExtractionJob",
    "ExtractorError",
    "InputError",
    "ModelError",
    "SentenceText",
    "ValidationError",
    "extract",
    "read_sentences",
    "__version__",
]
