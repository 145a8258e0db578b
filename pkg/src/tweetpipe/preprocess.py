"""Tweet normalization with an offset map, plus claim-conditioned formatting.

Usernames become ``@user`` and URLs become a language-dependent placeholder
(``(see url)`` for English, ``(ver url)`` for Spanish). Every normalized
character remembers which original character produced it, so spans found on
normalized text can be mapped back to the raw tweet and vice versa.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from .errors import DataError, InvalidSpansError
from .spans import Span


class Lang(Enum):
    EN = "en"
    ES = "es"


USER_PLACEHOLDER = "@user"
URL_PLACEHOLDERS = {Lang.EN: "(see url)", Lang.ES: "(ver url)"}

# URL alternative first so a handle inside a URL is swallowed by the URL.
_MATCH_RE = re.compile(r"(?P<url>(?:https?://|www\.)\S+)|(?P<user>@[A-Za-z0-9_]+)")


@dataclass(frozen=True)
class NormalizedText:
    """Original and normalized text plus a per-character offset map.

    ``offset_map[i]`` is the original index that produced normalized
    character ``i``; all characters of a replacement placeholder point at
    the first character of the replaced region, so the map is monotone.
    """

    original: str
    normalized: str
    offset_map: tuple[int, ...]
    lang: Lang


def normalize_text(text: str, lang: Lang) -> NormalizedText:
    """Replace usernames and URLs, keeping everything else verbatim."""
    out: list[str] = []
    offset_map: list[int] = []
    pos = 0
    for m in _MATCH_RE.finditer(text):
        for i in range(pos, m.start()):
            out.append(text[i])
            offset_map.append(i)
        replacement = URL_PLACEHOLDERS[lang] if m.lastgroup == "url" else USER_PLACEHOLDER
        out.append(replacement)
        offset_map.extend([m.start()] * len(replacement))
        pos = m.end()
    for i in range(pos, len(text)):
        out.append(text[i])
        offset_map.append(i)
    return NormalizedText(text, "".join(out), tuple(offset_map), lang)


def format_claim_input(claim: str, text: str) -> str:
    """Build the claim-conditioned classifier input ``About {claim}. [SEP] {text}``."""
    if not claim:
        raise DataError("claim must be non-empty")
    return f"About {claim}. [SEP] {text}"


def _source_end(nt: NormalizedText, norm_idx: int) -> int:
    """End (exclusive) of the original region that produced normalized char norm_idx."""
    origin = nt.offset_map[norm_idx]
    k = norm_idx + 1
    while k < len(nt.offset_map) and nt.offset_map[k] == origin:
        k += 1
    return nt.offset_map[k] if k < len(nt.offset_map) else len(nt.original)


def map_span_to_original(span: Span, nt: NormalizedText) -> Span:
    """Re-express a span on normalized text in original-text offsets.

    A span touching any part of a replacement placeholder covers the whole
    replaced original region.
    """
    if span.end > len(nt.normalized):
        raise InvalidSpansError(
            f"span ({span.start}, {span.end}) exceeds normalized length {len(nt.normalized)}"
        )
    start = nt.offset_map[span.start]
    end = _source_end(nt, span.end - 1)
    return Span(start, end, nt.original[start:end], span.category)


def map_span_to_normalized(span: Span, nt: NormalizedText) -> Span:
    """Re-express a span on original text in normalized-text offsets.

    Inverse companion of map_span_to_original: a span touching any part of a
    replaced region covers that region's whole placeholder.
    """
    if span.end > len(nt.original):
        raise InvalidSpansError(
            f"span ({span.start}, {span.end}) exceeds original length {len(nt.original)}"
        )
    first = last = None
    for i in range(len(nt.normalized)):
        src_start = nt.offset_map[i]
        src_end = _source_end(nt, i)
        if src_start < span.end and span.start < src_end:
            if first is None:
                first = i
            last = i
    if first is None:
        raise InvalidSpansError(
            f"span ({span.start}, {span.end}) has no image in the normalized text"
        )
    return Span(first, last + 1, nt.normalized[first : last + 1], span.category)
