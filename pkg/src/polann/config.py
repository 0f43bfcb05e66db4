"""Run configuration: a JSON document mirrored by the CLI flags.

A config file supplies defaults; flags given on the command line always
win.  Paths name the input and output artifacts so that a whole pipeline
run can be captured in one reviewable document.
"""

from __future__ import annotations

import json
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator
from pydantic import ValidationError as PydanticValidationError

from .errors import ValidationError


class PathSettings(BaseModel):
    model_config = ConfigDict(extra="forbid")

    corpus: tuple[str, ...] = ()
    lexicon: str | None = None
    lemma_map: str | None = None
    embeddings: str | None = None
    annotations: str | None = None
    labels: str | None = None
    params: str | None = None
    model: str | None = None
    out: str | None = None
    out_dir: str | None = None


class GmmSettings(BaseModel):
    model_config = ConfigDict(extra="forbid")

    covariance_type: Literal["full", "diagonal", "tied", "spherical"] = "full"
    tol: float = Field(default=1e-4, gt=0)
    max_iter: int = Field(default=200, ge=1)
    reg_covar: float = Field(default=1e-6, ge=0)
    n_init: int = Field(default=1, ge=1)
    standardize: bool = False


class TrainSettings(BaseModel):
    model_config = ConfigDict(extra="forbid")

    loss: Literal["ce", "gdwce"] = "ce"
    learning_rate: float = Field(default=1e-3, gt=0)
    batch_size: int = Field(default=16, ge=1)
    max_epochs: int = Field(default=100, ge=1)
    patience: int = Field(default=10, ge=1)
    clip_norm: float = Field(default=1.0, gt=0)
    hidden_sizes: tuple[int, ...] = ()
    n_trials: int = Field(default=4, ge=1)

    @field_validator("hidden_sizes")
    @classmethod
    def _positive_sizes(cls, value: tuple[int, ...]) -> tuple[int, ...]:
        if any(size < 1 for size in value):
            raise ValueError("hidden sizes must be positive")
        return value


class PipelineConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    paths: PathSettings = Field(default_factory=PathSettings)
    method: Literal["pc", "gaussian"] = "pc"
    seed: int = 0
    gmm: GmmSettings = Field(default_factory=GmmSettings)
    train: TrainSettings = Field(default_factory=TrainSettings)


def load_config(path: str) -> PipelineConfig:
    """Read and validate a PipelineConfig JSON document."""
    with open(path, "r", encoding="utf-8") as stream:
        text = stream.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config {path}: invalid JSON: {exc.msg}") from exc
    try:
        return PipelineConfig.model_validate(data)
    except PydanticValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(part) for part in first["loc"]) or "document"
        raise ValidationError(f"config {path}: {where}: {first['msg']}") from exc
