"""Lexicon-based normalization of free-text mentions to formal term ids.

A lexicon is built from (mention, term_id, term_text) training triples keyed
by lowercased, whitespace-collapsed surface forms. Lookup is exact first and
falls back to the nearest key by normalized Levenshtein distance, returning
nothing when even the nearest key is above the threshold.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import DataError, ParseError

DEFAULT_MAX_DIST = 0.25


def normalize_surface(text: str) -> str:
    """Lowercase and collapse runs of whitespace to single spaces."""
    return " ".join(text.lower().split())


def levenshtein(a: str, b: str) -> int:
    """Plain edit distance (insert/delete/substitute, all cost 1)."""
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        for j, cb in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def normalized_distance(a: str, b: str) -> float:
    longest = max(len(a), len(b))
    if longest == 0:
        return 0.0
    return levenshtein(a, b) / longest


@dataclass(frozen=True)
class Lexicon:
    """Immutable surface form -> (term_id, term_text) map."""

    entries: Mapping[str, tuple[str, str]]

    def __len__(self) -> int:
        return len(self.entries)


def build_lexicon(pairs: Iterable[tuple[str, str, str]]) -> Lexicon:
    """Build a lexicon from (mention, term_id, term_text) triples.

    When one surface form is seen with different terms, the most frequent
    term wins; frequency ties go to the lexicographically smallest term_id.
    """
    counts: Counter[tuple[str, str]] = Counter()
    term_texts: dict[tuple[str, str], str] = {}
    for mention, term_id, term_text in pairs:
        key = normalize_surface(mention)
        counts[(key, term_id)] += 1
        term_texts.setdefault((key, term_id), term_text)
    if not counts:
        raise DataError("build_lexicon needs at least one training pair")
    entries: dict[str, tuple[str, str]] = {}
    for key in sorted({key for key, _ in counts}):
        candidates = [(term_id, n) for (k, term_id), n in counts.items() if k == key]
        term_id = min(candidates, key=lambda pair: (-pair[1], pair[0]))[0]
        entries[key] = (term_id, term_texts[(key, term_id)])
    return Lexicon(entries)


def normalize_mention(
    mention: str, lexicon: Lexicon, max_dist: float = DEFAULT_MAX_DIST
) -> tuple[str, str] | None:
    """Map a mention to (term_id, term_text), or None if nothing is close enough.

    Exact lookup on the normalized surface wins; otherwise the nearest key by
    normalized edit distance is used if within max_dist, ties going to the
    lexicographically smallest key.
    """
    if not 0.0 <= max_dist <= 1.0:
        raise DataError(f"max_dist must be within [0, 1], got {max_dist}")
    surface = normalize_surface(mention)
    hit = lexicon.entries.get(surface)
    if hit is not None:
        return hit
    best: tuple[float, str] | None = None
    for key in lexicon.entries:
        candidate = (normalized_distance(surface, key), key)
        if best is None or candidate < best:
            best = candidate
    if best is None or best[0] > max_dist:
        return None
    return lexicon.entries[best[1]]


def save_lexicon(lexicon: Lexicon, path: str) -> None:
    """Write tab-separated ``surface -> term_id -> term_text`` lines, sorted."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for surface in sorted(lexicon.entries):
            term_id, term_text = lexicon.entries[surface]
            for part in (surface, term_id, term_text):
                if "\t" in part or "\n" in part:
                    raise DataError(f"lexicon field {part!r} contains a tab or newline")
            fh.write(f"{surface}\t{term_id}\t{term_text}\n")


def load_lexicon(path: str) -> Lexicon:
    entries: dict[str, tuple[str, str]] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ParseError(path, line_no, f"expected 3 tab-separated fields, got {len(parts)}")
            entries[parts[0]] = (parts[1], parts[2])
    return Lexicon(entries)
