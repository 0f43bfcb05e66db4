"""Emotion-polarity annotation toolkit.

Annotates sentences as positive, negative, neutral, or mixed by two
routes: lexicon-driven polarity-coordinate classification and a
Gaussian mixture over sentence-embedding features.  A small softmax
classifier trains on the resulting silver labels with plain or
confidence-weighted cross-entropy, and an evaluation layer provides
Macro-F1, confusion matrices, and Cohen's kappa.
"""

from .errors import FitError, ParseError, PolannError, TrainingError, ValidationError
from .polarity import (
    LABELS,
    CentroidSet,
    PcAnnotation,
    PolarityCoordinate,
    SentimentLabel,
    annotate_pc,
)

__version__ = "0.1.0"

__all__ = [
    "FitError",
    "ParseError",
    "PolannError",
    "TrainingError",
    "ValidationError",
    "LABELS",
    "CentroidSet",
    "PcAnnotation",
    "PolarityCoordinate",
    "SentimentLabel",
    "annotate_pc",
    "__version__",
]
