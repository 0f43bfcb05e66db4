"""Model backends. Heavy imports happen lazily so that parsing inputs or
validating a job never requires torch."""

from __future__ import annotations

import os

import numpy as np

from .errors import ModelError

# transformers uses a huge sentinel when a checkpoint declares no length limit
_NO_LIMIT = 100_000


def _silence_hf() -> None:
    os.environ.setdefault("HF_HUB_DISABLE_PROGRESS_BARS", "1")
    os.environ.setdefault("TOKENIZERS_PARALLELISM", "false")
    try:
        from transformers.utils import logging as hf_logging

        hf_logging.set_verbosity_error()
        hf_logging.disable_progress_bar()
    except Exception:
        pass


class EncoderBackend:
    """Plain transformer encoder: first-token or mean pooling over the last
    hidden layer."""

    def __init__(self, model_id: str, max_length: int | None = None):
        _silence_hf()
        try:
            import torch
            from transformers import AutoModel, AutoTokenizer
        except ImportError as exc:  # pragma: no cover
            raise ModelError(f"transformers backend unavailable: {exc}") from None
        try:
            self._tokenizer = AutoTokenizer.from_pretrained(model_id)
            self._model = AutoModel.from_pretrained(model_id)
        except Exception as exc:
            raise ModelError(f"cannot load model {model_id!r}: {exc}") from None
        self._torch = torch
        self._model.eval()

        limit = getattr(self._tokenizer, "model_max_length", None)
        if limit is None or limit > _NO_LIMIT:
            limit = getattr(self._model.config, "max_position_embeddings", None)
        self.max_length = limit if max_length is None else min(max_length, limit or max_length)
        self.dimension = int(self._model.config.hidden_size)

    def encode(self, texts: list[str], pooling: str) -> np.ndarray:
        torch = self._torch
        batch = self._tokenizer(
            texts,
            padding=True,
            truncation=True,
            max_length=self.max_length,
            return_tensors="pt",
        )
        with torch.no_grad():
            output = self._model(**batch)
        hidden = output.last_hidden_state
        if pooling == "first-token":
            pooled = hidden[:, 0, :]
        elif pooling == "mean":
            mask = batch["attention_mask"].unsqueeze(-1).to(hidden.dtype)
            pooled = (hidden * mask).sum(dim=1) / mask.sum(dim=1).clamp(min=1)
        else:
            raise ModelError(f"unsupported pooling for encoder backend: {pooling!r}")
        return pooled.cpu().numpy().astype(np.float64)


class SentenceEmbeddingBackend:
    """Sentence-embedding model with its own pooling head. Used only for
    sequence-level-native pooling."""

    def __init__(self, model_id: str, max_length: int | None = None):
        _silence_hf()
        try:
            from sentence_transformers import SentenceTransformer
        except ImportError as exc:  # pragma: no cover
            raise ModelError(f"sentence-transformers backend unavailable: {exc}") from None
        # A bare encoder directory would be silently wrapped with mean pooling,
        # which is not "native" in any meaningful sense; insist on a saved
        # sentence-embedding model.
        if os.path.isdir(model_id) and not os.path.exists(
            os.path.join(model_id, "modules.json")
        ):
            raise ModelError(
                f"{model_id!r} is not a sentence-embedding model; "
                "use first-token or mean pooling instead"
            )
        try:
            self._model = SentenceTransformer(model_id)
        except Exception as exc:
            raise ModelError(f"cannot load model {model_id!r}: {exc}") from None
        self._model.eval()
        if max_length is not None:
            self._model.max_seq_length = min(
                max_length, self._model.max_seq_length or max_length
            )
        self.max_length = self._model.max_seq_length
        getter = getattr(self._model, "get_embedding_dimension", None) or getattr(
            self._model, "get_sentence_embedding_dimension"
        )
        self.dimension = int(getter())

    def encode(self, texts: list[str], pooling: str) -> np.ndarray:
        if pooling != "sequence-level-native":
            raise ModelError(f"unsupported pooling for sentence backend: {pooling!r}")
        vectors = self._model.encode(
            texts,
            batch_size=len(texts),
            convert_to_numpy=True,
            show_progress_bar=False,
        )
        return np.asarray(vectors, dtype=np.float64)


def load_backend(model_id: str, pooling: str, max_length: int | None = None):
    if pooling == "sequence-level-native":
        return SentenceEmbeddingBackend(model_id, max_length=max_length)
    return EncoderBackend(model_id, max_length=max_length)
