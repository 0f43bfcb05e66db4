"""Sentence input parsing: two-column TSV, id then text."""

from __future__ import annotations

from .errors import InputError, ValidationError
from .job import SentenceText


def read_sentences(data) -> list[SentenceText]:
    """Parse "id<TAB>text" lines; '#' comments and blank lines are skipped.

    Text may be empty (the extractor writes a zero vector for it) but the
    column must be present.
    """
    if hasattr(data, "read"):
        data = data.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    sentences: list[SentenceText] = []
    seen: set[str] = set()
    for lineno, line in enumerate(data.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 2:
            raise InputError(
                f"expected 'id<TAB>text', found {len(fields)} fields", line=lineno
            )
        sentence_id = fields[0].strip()
        if sentence_id in seen:
            raise InputError(f"duplicate sentence id {sentence_id!r}", line=lineno)
        try:
            sentences.append(SentenceText(id=sentence_id, text=fields[1].strip()))
        except ValidationError as exc:
            raise InputError(str(exc), line=lineno) from None
        seen.add(sentence_id)
    return sentences
