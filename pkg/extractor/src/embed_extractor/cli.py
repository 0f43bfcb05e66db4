"""Command line front end: embed-extract."""

from __future__ import annotations

import argparse
import sys

from .errors import ExtractorError
from .extract import extract
from .inputs import read_sentences
from .job import DEFAULT_POOLING, POOLING_MODES, ExtractionJob


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; keep 2 for data problems instead
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="embed-extract",
        description="Extract sentence vectors from a transformer model.",
    )
    parser.add_argument("--model", required=True, help="model name or local path")
    parser.add_argument(
        "--input", required=True, help="TSV file with two columns: id, text"
    )
    parser.add_argument(
        "--pooling",
        choices=POOLING_MODES,
        default=DEFAULT_POOLING,
        help=f"pooling strategy (default: {DEFAULT_POOLING})",
    )
    parser.add_argument("--out", required=True, help="output path (JSON lines)")
    parser.add_argument(
        "--batch-size", type=int, default=32, help="sentences per model call"
    )
    parser.add_argument(
        "--max-length",
        type=int,
        default=None,
        help="token cap per sentence; the model's own limit still applies",
    )
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with open(args.input, "r", encoding="utf-8") as handle:
            sentences = read_sentences(handle)
        job = ExtractionJob(
            model=args.model,
            sentences=tuple(sentences),
            out=args.out,
            pooling=args.pooling,
            max_length=args.max_length,
            batch_size=args.batch_size,
        )
        count, dimension = extract(job)
    except (ExtractorError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"sentences\t{count}")
    print(f"dimension\t{dimension}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
