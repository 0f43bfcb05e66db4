"""Request and response models for the HTTP service."""

from __future__ import annotations

from pydantic import BaseModel, Field


class TokenIn(BaseModel):
    form: str
    lemma: str | None = None


class SentenceIn(BaseModel):
    id: str
    tokens: list[TokenIn] = Field(min_length=1)


class AnnotatePcRequest(BaseModel):
    sentences: list[SentenceIn] = Field(min_length=1)
    lexicon: dict[str, float]
    # label -> [polarity, intensity]; all four labels required when given
    centroids: dict[str, tuple[float, float]] | None = None


class AnnotationOut(BaseModel):
    sentence_id: str
    label: str
    alpha: float
    polarity: float
    intensity: float
    matched_count: int


class AnnotatePcResponse(BaseModel):
    annotations: list[AnnotationOut]
    distribution: dict[str, int]


class ClassifyRequest(BaseModel):
    polarity: float = Field(ge=0.0, le=1.0)
    intensity: float = Field(ge=0.0, le=1.0)
    centroids: dict[str, tuple[float, float]] | None = None


class ClassifyResponse(BaseModel):
    label: str
    alpha: float
    distances: dict[str, float]


class SplitRequest(BaseModel):
    ids: list[str] = Field(min_length=3)
    seed: int = 0


class SplitResponse(BaseModel):
    train: list[str]
    validation: list[str]
    test: list[str]


class LabeledId(BaseModel):
    id: str
    label: str


class EvaluateRequest(BaseModel):
    gold: list[LabeledId] = Field(min_length=1)
    predicted: list[LabeledId] = Field(min_length=1)
    groups: dict[str, str] | None = None
    only_present: bool = False


class EvaluateResponse(BaseModel):
    confusion: list[list[int]]
    precision: dict[str, float]
    recall: dict[str, float]
    f1: dict[str, float]
    support: dict[str, int]
    macro_f1: float
    micro_f1: float
    grouped: dict[str, float] | None = None
    grouped_mean: float | None = None


class AgreementRequest(BaseModel):
    a: list[LabeledId] = Field(min_length=1)
    b: list[LabeledId] = Field(min_length=1)


class AgreementResponse(BaseModel):
    kappa: float


class HealthResponse(BaseModel):
    status: str
