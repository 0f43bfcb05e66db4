"""Tab-separated file formats shared by the command-line tools.

Annotation rows travel as TSV with no header.  The full five-column form
is `id<TAB>label<TAB>alpha<TAB>polarity<TAB>intensity`; a bare
`id<TAB>label` pair and the three-column `id<TAB>label<TAB>alpha` form
are accepted on input with alpha defaulting to 1.  Real numbers are
written with six decimal places.  Split manifests hold one sentence id
per line.

Writers go through atomic_write: content lands in a temporary file in
the target directory and is moved over the destination only on success,
so readers never observe a half-written file.
"""

from __future__ import annotations

import os
import tempfile
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ParseError, ValidationError
from .polarity import PcAnnotation, PolarityCoordinate, SentimentLabel

REAL_DIGITS = 6


def format_real(value: float) -> str:
    return f"{value:.{REAL_DIGITS}f}"


@dataclass(frozen=True)
class AnnotationRow:
    """One annotated sentence as it appears on disk."""

    sentence_id: str
    label: SentimentLabel
    alpha: float = 1.0
    coordinate: PolarityCoordinate | None = None

    def __post_init__(self):
        _check_id(self.sentence_id)
        if not 0.0 <= self.alpha <= 1.0:
            raise ValidationError(f"alpha {self.alpha} outside [0, 1]")


def _check_id(sentence_id: str) -> None:
    if not sentence_id:
        raise ValidationError("sentence id must be non-empty")
    if "\t" in sentence_id or "\n" in sentence_id or "\r" in sentence_id:
        raise ValidationError(f"sentence id {sentence_id!r} contains tab or newline")


def _as_lines(data) -> list[str]:
    if hasattr(data, "read"):
        data = data.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return data.splitlines()


def rows_from_pc(annotations: Iterable[PcAnnotation]) -> list[AnnotationRow]:
    return [
        AnnotationRow(
            sentence_id=a.sentence_id,
            label=a.label,
            alpha=a.alpha,
            coordinate=a.coordinate,
        )
        for a in annotations
    ]


def _parse_real(text: str, what: str, lineno: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"{what} {text!r} is not a number", line=lineno) from None
    if not 0.0 <= value <= 1.0:
        raise ParseError(f"{what} {value} outside [0, 1]", line=lineno)
    return value


def read_annotation_rows(data) -> list[AnnotationRow]:
    """Parse annotation TSV; accepts 2, 3, or 5 columns per row."""
    rows: list[AnnotationRow] = []
    seen: set[str] = set()
    for lineno, line in enumerate(_as_lines(data), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) not in (2, 3, 5):
            raise ParseError(
                f"expected 2, 3, or 5 tab-separated fields, found {len(fields)}",
                line=lineno,
            )
        sentence_id = fields[0].strip()
        try:
            label = SentimentLabel.parse(fields[1])
        except ValidationError as exc:
            raise ParseError(str(exc), line=lineno) from None
        alpha = 1.0
        if len(fields) >= 3:
            alpha = _parse_real(fields[2], "alpha", lineno)
        coordinate = None
        if len(fields) == 5:
            coordinate = PolarityCoordinate(
                polarity=_parse_real(fields[3], "polarity", lineno),
                intensity=_parse_real(fields[4], "intensity", lineno),
            )
        if sentence_id in seen:
            raise ParseError(f"duplicate sentence id {sentence_id!r}", line=lineno)
        seen.add(sentence_id)
        try:
            rows.append(
                AnnotationRow(
                    sentence_id=sentence_id, label=label, alpha=alpha, coordinate=coordinate
                )
            )
        except ValidationError as exc:
            raise ParseError(str(exc), line=lineno) from None
    return rows


def write_annotation_rows(rows: Sequence[AnnotationRow], stream) -> None:
    """Write the five-column form; every row must carry a coordinate."""
    for row in rows:
        if row.coordinate is None:
            raise ValidationError(f"row {row.sentence_id!r} has no coordinate")
        stream.write(
            "\t".join(
                (
                    row.sentence_id,
                    str(row.label),
                    format_real(row.alpha),
                    format_real(row.coordinate.polarity),
                    format_real(row.coordinate.intensity),
                )
            )
            + "\n"
        )


def write_label_rows(rows: Sequence[AnnotationRow], stream) -> None:
    """Write the three-column id, label, alpha form."""
    for row in rows:
        stream.write(
            "\t".join((row.sentence_id, str(row.label), format_real(row.alpha))) + "\n"
        )


def rows_by_id(rows: Sequence[AnnotationRow]) -> dict[str, AnnotationRow]:
    out: dict[str, AnnotationRow] = {}
    for row in rows:
        if row.sentence_id in out:
            raise ValidationError(f"duplicate sentence id {row.sentence_id!r}")
        out[row.sentence_id] = row
    return out


def align_rows(
    gold: Sequence[AnnotationRow], predicted: Sequence[AnnotationRow]
) -> tuple[list[str], list[SentimentLabel], list[SentimentLabel]]:
    """Pair gold and predicted labels by sentence id, in gold order.

    The two sets of ids must match exactly; anything missing or extra is
    reported by id.
    """
    gold_map = rows_by_id(gold)
    pred_map = rows_by_id(predicted)
    missing = sorted(set(gold_map) - set(pred_map))
    extra = sorted(set(pred_map) - set(gold_map))
    problems = []
    if missing:
        shown = ", ".join(repr(m) for m in missing[:10])
        problems.append(f"ids missing from predictions: {shown}")
    if extra:
        shown = ", ".join(repr(e) for e in extra[:10])
        problems.append(f"ids absent from gold: {shown}")
    if problems:
        raise ValidationError("; ".join(problems))
    ids = [row.sentence_id for row in gold]
    return ids, [gold_map[i].label for i in ids], [pred_map[i].label for i in ids]


def read_id_list(data) -> list[str]:
    """One sentence id per line; blank lines are ignored."""
    ids: list[str] = []
    seen: set[str] = set()
    for lineno, line in enumerate(_as_lines(data), start=1):
        sentence_id = line.strip()
        if not sentence_id:
            continue
        if sentence_id in seen:
            raise ParseError(f"duplicate sentence id {sentence_id!r}", line=lineno)
        seen.add(sentence_id)
        ids.append(sentence_id)
    return ids


def write_id_list(ids: Sequence[str], stream) -> None:
    for sentence_id in ids:
        _check_id(sentence_id)
        stream.write(sentence_id + "\n")


def read_group_map(data) -> dict[str, str]:
    """Two-column TSV mapping sentence id to group name."""
    groups: dict[str, str] = {}
    for lineno, line in enumerate(_as_lines(data), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 2:
            raise ParseError(
                f"expected 2 tab-separated fields, found {len(fields)}", line=lineno
            )
        sentence_id, group = fields[0].strip(), fields[1].strip()
        if not sentence_id or not group:
            raise ParseError("sentence id and group must be non-empty", line=lineno)
        if sentence_id in groups:
            raise ParseError(f"duplicate sentence id {sentence_id!r}", line=lineno)
        groups[sentence_id] = group
    return groups


@contextmanager
def atomic_write(path):
    """Write to a sibling temporary file, then move it into place."""
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=os.path.basename(path) + ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as stream:
            yield stream
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
