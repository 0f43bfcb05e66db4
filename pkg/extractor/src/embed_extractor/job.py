"""Extraction job description and validation."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ValidationError

# "sequence-level-native" asks a sentence-embedding model for its own
# pooled output; the other two pool a plain encoder's hidden states.
POOLING_MODES = ("sequence-level-native", "first-token", "mean")
DEFAULT_POOLING = "first-token"


@dataclass(frozen=True)
class SentenceText:
    """One input sentence: an id and its raw text."""

    id: str
    text: str

    def __post_init__(self):
        if not self.id:
            raise ValidationError("sentence id must be non-empty")
        if any(c in self.id for c in "\t\n\r"):
            raise ValidationError(f"sentence id {self.id!r} contains tab or newline")


@dataclass(frozen=True)
class ExtractionJob:
    """Everything one extraction run needs."""

    model: str
    sentences: tuple[SentenceText, ...]
    out: str
    pooling: str = DEFAULT_POOLING
    max_length: int | None = None
    batch_size: int = 32

    def __post_init__(self):
        if not self.model:
            raise ValidationError("model identifier must be non-empty")
        if not self.sentences:
            raise ValidationError("need at least one sentence")
        if self.pooling not in POOLING_MODES:
            raise ValidationError(
                f"unknown pooling {self.pooling!r}; choose from {', '.join(POOLING_MODES)}"
            )
        if self.max_length is not None and self.max_length < 2:
            # two slots go to the special boundary tokens
            raise ValidationError("max_length must be at least 2")
        if self.batch_size < 1:
            raise ValidationError("batch_size must be at least 1")
