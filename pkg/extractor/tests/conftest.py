"""Shared fixtures: a tiny transformer checkpoint built on the fly so tests
never touch the network."""

import os

import pytest

os.environ.setdefault("HF_HUB_OFFLINE", "1")
os.environ.setdefault("HF_HUB_DISABLE_PROGRESS_BARS", "1")
os.environ.setdefault("TOKENIZERS_PARALLELISM", "false")

WORDS = [
    "[PAD]",
    "[UNK]",
    "[CLS]",
    "[SEP]",
    "[MASK]",
    "arma",
    "virum",
    "cano",
    "troiae",
    "qui",
    "primus",
    "ab",
    "oris",
    "laetus",
    "tristis",
    "et",
    "in",
    "ad",
    "cum",
] + list("abcdefghijklmnopqrstuvwxyz")


@pytest.fixture(scope="session")
def tiny_model_dir(tmp_path_factory):
    """A 16-dim BERT encoder with a 16-token window, saved locally."""
    import torch
    from transformers import BertConfig, BertModel, BertTokenizerFast
    from transformers.utils import logging as hf_logging

    hf_logging.set_verbosity_error()
    root = tmp_path_factory.mktemp("tiny-bert")
    tokenizer = BertTokenizerFast(
        vocab={word: i for i, word in enumerate(WORDS)},
        do_lower_case=True,
        model_max_length=16,
    )
    # guard against the vocabulary silently not loading, which would send
    # every word to [UNK] and make sentence vectors indistinguishable
    ids = tokenizer("arma cano")["input_ids"]
    assert tokenizer.unk_token_id not in ids, ids
    torch.manual_seed(0)
    config = BertConfig(
        vocab_size=len(WORDS),
        hidden_size=16,
        num_hidden_layers=2,
        num_attention_heads=2,
        intermediate_size=32,
        max_position_embeddings=16,
    )
    model = BertModel(config)
    model.save_pretrained(str(root))
    tokenizer.save_pretrained(str(root))
    return str(root)


@pytest.fixture(scope="session")
def tiny_sentence_model_dir(tmp_path_factory, tiny_model_dir):
    """The tiny encoder wrapped with a saved mean-pooling head, so it counts
    as a sentence-embedding model."""
    from sentence_transformers import SentenceTransformer

    try:
        from sentence_transformers.sentence_transformer import modules
    except ImportError:
        from sentence_transformers import models as modules

    root = tmp_path_factory.mktemp("tiny-st")
    transformer = modules.Transformer(tiny_model_dir, max_seq_length=16)
    dim_getter = getattr(
        transformer, "get_embedding_dimension", None
    ) or getattr(transformer, "get_word_embedding_dimension")
    pooling = modules.Pooling(dim_getter(), pooling_mode="mean")
    model = SentenceTransformer(modules=[transformer, pooling])
    model.save(str(root))
    return str(root)
