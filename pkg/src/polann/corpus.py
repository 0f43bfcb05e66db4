"""CoNLL-U corpus ingestion, sentiment lexica, and seeded dataset splits."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

import numpy as np

from .errors import ParseError, ValidationError

# Bit generator behind every seeded shuffle; named so splits are reproducible.
SPLIT_BIT_GENERATOR = "PCG64"

_TOKEN_ID = re.compile(r"^[0-9]+$")
_RANGE_ID = re.compile(r"^[0-9]+-[0-9]+$")
_EMPTY_NODE_ID = re.compile(r"^[0-9]+\.[0-9]+$")
_CONLLU_COLUMNS = 10


@dataclass(frozen=True)
class Token:
    """A surface token with an optional lemma."""

    form: str
    lemma: str | None = None

    def __post_init__(self):
        if not self.form:
            raise ValidationError("token form must be non-empty")
        if "\t" in self.form or "\n" in self.form:
            raise ValidationError("token form must not contain tabs or newlines")


@dataclass(frozen=True)
class Sentence:
    """An ordered token sequence with a unique identifier."""

    id: str
    tokens: tuple[Token, ...]
    group: str | None = None
    raw_text: str | None = None

    def __post_init__(self):
        if not self.id:
            raise ValidationError("sentence id must be non-empty")
        object.__setattr__(self, "tokens", tuple(self.tokens))
        if not self.tokens:
            raise ValidationError(f"sentence {self.id!r} has no tokens")


@dataclass(frozen=True)
class Corpus:
    """An ordered collection of sentences with pairwise-distinct ids."""

    sentences: tuple[Sentence, ...]
    source: str = ""

    def __post_init__(self):
        object.__setattr__(self, "sentences", tuple(self.sentences))
        seen = set()
        for sentence in self.sentences:
            if sentence.id in seen:
                raise ValidationError(f"duplicate sentence id {sentence.id!r}")
            seen.add(sentence.id)

    def __len__(self) -> int:
        return len(self.sentences)

    def __iter__(self) -> Iterator[Sentence]:
        return iter(self.sentences)

    def ids(self) -> list[str]:
        return [sentence.id for sentence in self.sentences]


@dataclass(frozen=True)
class Lexicon:
    """Lemma to sentiment score, every score within [-1, 1]."""

    entries: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        for lemma, score in self.entries.items():
            if not lemma:
                raise ValidationError("lexicon lemma must be non-empty")
            if not -1.0 <= score <= 1.0:
                raise ValidationError(f"lexicon score for {lemma!r} outside [-1, 1]: {score}")

    def __len__(self) -> int:
        return len(self.entries)


def _as_text(data) -> str:
    if hasattr(data, "read"):
        data = data.read()
    if isinstance(data, bytes):
        try:
            return data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not valid UTF-8: {exc}") from exc
    return data


def parse_conllu(data, source: str = "conllu") -> Corpus:
    """Parse CoNLL-U text into a Corpus.

    Token forms come from column 2 and lemmata from column 3 ("_" means
    absent).  Multiword-range lines ("1-2") and empty-node lines ("1.1")
    are skipped.  A sentence takes its id from the "# sent_id =" comment
    when present, otherwise "<source>:<n>" with n the 1-based position.
    """
    text = _as_text(data)
    sentences: list[Sentence] = []
    seen_ids: set[str] = set()

    sent_id: str | None = None
    raw_text: str | None = None
    tokens: list[Token] = []
    block_start: int | None = None

    def flush(line_no: int) -> None:
        nonlocal sent_id, raw_text, tokens, block_start
        if block_start is None:
            return
        if not tokens:
            raise ParseError("sentence block contains no token lines", line=block_start)
        sid = sent_id if sent_id is not None else f"{source}:{len(sentences) + 1}"
        if sid in seen_ids:
            raise ParseError(f"duplicate sentence id {sid!r}", line=line_no)
        seen_ids.add(sid)
        sentences.append(Sentence(id=sid, tokens=tuple(tokens), raw_text=raw_text))
        sent_id = None
        raw_text = None
        tokens = []
        block_start = None

    line_no = 0
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.rstrip("\r")
        if not line.strip():
            flush(line_no)
            continue
        if block_start is None:
            block_start = line_no
        if line.startswith("#"):
            comment = line[1:].strip()
            if comment.startswith("sent_id"):
                _, _, value = comment.partition("=")
                sent_id = value.strip()
            elif comment.startswith("text"):
                _, _, value = comment.partition("=")
                raw_text = value.strip()
            continue
        columns = line.split("\t")
        if len(columns) != _CONLLU_COLUMNS:
            raise ParseError(
                f"expected {_CONLLU_COLUMNS} tab-separated columns, found {len(columns)}",
                line=line_no,
            )
        token_id = columns[0]
        if _RANGE_ID.match(token_id) or _EMPTY_NODE_ID.match(token_id):
            continue
        if not _TOKEN_ID.match(token_id):
            raise ParseError(f"malformed token id {token_id!r}", line=line_no)
        form = columns[1]
        if not form:
            raise ParseError("empty token form", line=line_no)
        lemma = columns[2] if columns[2] != "_" else None
        tokens.append(Token(form=form, lemma=lemma))
    flush(line_no + 1)

    return Corpus(sentences=tuple(sentences), source=source)


def merge_corpora(corpora: Iterable[Corpus], source: str = "merged") -> Corpus:
    """Concatenate corpora; duplicate sentence ids across inputs are an error."""
    sentences: list[Sentence] = []
    for corpus in corpora:
        sentences.extend(corpus.sentences)
    return Corpus(sentences=tuple(sentences), source=source)


def load_lexicon(data) -> Lexicon:
    """Load a "lemma<TAB>score" lexicon.

    Keys are lowercased; a lemma appearing on several lines (one per part
    of speech, typically) stores the arithmetic mean of its scores.
    """
    text = _as_text(data)
    sums: dict[str, float] = {}
    counts: dict[str, int] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.rstrip("\r")
        if not line.strip() or line.startswith("#"):
            continue
        columns = line.split("\t")
        if len(columns) != 2:
            raise ParseError(
                f"expected 'lemma<TAB>score', found {len(columns)} columns", line=line_no
            )
        lemma = columns[0].strip().lower()
        if not lemma:
            raise ParseError("empty lemma", line=line_no)
        try:
            score = float(columns[1])
        except ValueError as exc:
            raise ParseError(f"non-numeric score {columns[1]!r}", line=line_no) from exc
        if not -1.0 <= score <= 1.0:
            raise ParseError(f"score {score} outside [-1, 1]", line=line_no)
        sums[lemma] = sums.get(lemma, 0.0) + score
        counts[lemma] = counts.get(lemma, 0) + 1
    entries = {lemma: sums[lemma] / counts[lemma] for lemma in sums}
    return Lexicon(entries=entries)


def load_lemma_map(data) -> dict[str, str]:
    """Load a "form<TAB>lemma" map; form keys are lowercased, later lines win."""
    text = _as_text(data)
    mapping: dict[str, str] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.rstrip("\r")
        if not line.strip() or line.startswith("#"):
            continue
        columns = line.split("\t")
        if len(columns) != 2 or not columns[0] or not columns[1]:
            raise ParseError("expected 'form<TAB>lemma'", line=line_no)
        mapping[columns[0].strip().lower()] = columns[1].strip()
    return mapping


def apply_lemma_map(corpus: Corpus, mapping: Mapping[str, str]) -> Corpus:
    """Fill missing token lemmata from a surface-form map."""
    sentences = []
    for sentence in corpus:
        tokens = tuple(
            Token(form=token.form, lemma=mapping.get(token.form.lower()))
            if token.lemma is None
            else token
            for token in sentence.tokens
        )
        sentences.append(
            Sentence(id=sentence.id, tokens=tokens, group=sentence.group, raw_text=sentence.raw_text)
        )
    return Corpus(sentences=tuple(sentences), source=corpus.source)


def lookup_score(lexicon: Lexicon, token: Token) -> float | None:
    """Score for the token's lemma, falling back to its lowercased form."""
    if token.lemma is not None:
        score = lexicon.entries.get(token.lemma.lower())
        if score is not None:
            return score
    return lexicon.entries.get(token.form.lower())


def split_sizes(n: int) -> tuple[int, int, int]:
    """Train/validation/test sizes: floor(0.8n), ceil(0.1n), remainder."""
    if n < 3:
        raise ValidationError(f"cannot form three splits from {n} sentences")
    n_train = (8 * n) // 10
    n_val = -((-n) // 10)
    return n_train, n_val, n - n_train - n_val


def split_ids(ids: list[str], seed: int) -> tuple[list[str], list[str], list[str]]:
    """Deterministically shuffle ids and cut them into the three split sizes."""
    n_train, n_val, _ = split_sizes(len(ids))
    rng = np.random.Generator(np.random.PCG64(seed))
    perm = rng.permutation(len(ids))
    shuffled = [ids[i] for i in perm]
    return (
        shuffled[:n_train],
        shuffled[n_train : n_train + n_val],
        shuffled[n_train + n_val :],
    )


def split_dataset(corpus: Corpus, seed: int) -> tuple[Corpus, Corpus, Corpus]:
    """Split a corpus 80/10/10 with a seeded PCG64 shuffle.

    The same seed always produces the same partition; the three parts are
    disjoint and cover the corpus.
    """
    if len(corpus) == 0:
        raise ValidationError("cannot split an empty corpus")
    by_id = {sentence.id: sentence for sentence in corpus}
    train_ids, val_ids, test_ids = split_ids(corpus.ids(), seed)

    def take(ids: list[str]) -> Corpus:
        return Corpus(sentences=tuple(by_id[i] for i in ids), source=corpus.source)

    return take(train_ids), take(val_ids), take(test_ids)
