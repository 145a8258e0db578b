"""Character spans, simple tokenization and the BIO tag codec.

Gold spans are encoded as one tag per token (B = first token of an entity,
I = inside, O = outside); predicted tag sequences are decoded back into
character spans. A stray I with no open entity is repaired to B, the usual
CoNLL-style convention, so decoders never drop tokens.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from .errors import AlignmentError, InvalidSpansError, ShapeError

# Maximal alphanumeric runs, else any single non-space character.
_TOKEN_RE = re.compile(r"[^\W_]+|\S")


class BioTag(Enum):
    B = "B"
    I = "I"
    O = "O"


@dataclass(frozen=True)
class Token:
    """A token with half-open character offsets into its source text."""

    text: str
    start: int
    end: int

    def __post_init__(self):
        if self.start >= self.end:
            raise InvalidSpansError(f"token ({self.start}, {self.end}) is empty or reversed")


@dataclass(frozen=True)
class Span:
    """A half-open character interval with its surface text and category."""

    start: int
    end: int
    text: str = ""
    category: str = ""

    def __post_init__(self):
        if self.start >= self.end or self.start < 0:
            raise InvalidSpansError(f"span ({self.start}, {self.end}) is empty or reversed")

    def overlaps(self, other: "Span") -> bool:
        return self.start < other.end and other.start < self.end


def tokenize(text: str) -> list[Token]:
    """Split text into maximal alphanumeric runs plus single punctuation marks.

    Offsets index the input, so concatenating token slices reproduces every
    non-whitespace character exactly once.
    """
    return [Token(m.group(), m.start(), m.end()) for m in _TOKEN_RE.finditer(text)]


def check_spans_disjoint(spans: list[Span], context: str = "") -> list[Span]:
    """Return spans sorted by offsets, raising if any two overlap."""
    ordered = sorted(spans, key=lambda s: (s.start, s.end))
    for prev, cur in zip(ordered, ordered[1:]):
        if prev.overlaps(cur):
            where = f" in {context}" if context else ""
            raise InvalidSpansError(
                f"overlapping spans{where}: ({prev.start}, {prev.end}) and ({cur.start}, {cur.end})"
            )
    return ordered


def encode_bio(tokens: list[Token], spans: list[Span]) -> list[BioTag]:
    """Tag each token B/I/O against a set of non-overlapping token-aligned spans."""
    ordered = check_spans_disjoint(spans)
    starts = {t.start: i for i, t in enumerate(tokens)}
    ends = {t.end: i for i, t in enumerate(tokens)}
    tags = [BioTag.O] * len(tokens)
    for span in ordered:
        if span.start not in starts or span.end not in ends:
            raise AlignmentError(
                f"span ({span.start}, {span.end}) does not align with token boundaries"
            )
        first, last = starts[span.start], ends[span.end]
        tags[first] = BioTag.B
        for i in range(first + 1, last + 1):
            tags[i] = BioTag.I
    return tags


def decode_bio(
    tokens: list[Token],
    tags: list[BioTag],
    source: str | None = None,
    category: str = "ENT",
) -> list[Span]:
    """Decode a BIO tag sequence into character spans.

    Maximal runs starting at B and continuing through I become one span. A
    stray I (no preceding B or I) opens a new span. Span text is sliced from
    `source` when given, otherwise token texts are joined with single spaces.
    """
    if len(tokens) != len(tags):
        raise ShapeError(f"{len(tokens)} tokens but {len(tags)} tags")
    spans: list[Span] = []
    run: list[Token] = []

    def close():
        if run:
            start, end = run[0].start, run[-1].end
            text = source[start:end] if source is not None else " ".join(t.text for t in run)
            spans.append(Span(start, end, text, category))
            run.clear()

    for token, tag in zip(tokens, tags):
        if tag is BioTag.B:
            close()
            run.append(token)
        elif tag is BioTag.I:
            # stray I is repaired to B
            run.append(token)
        else:
            close()
    close()
    return spans
