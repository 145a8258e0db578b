"""Line-delimited JSON record and prediction files.

One record per line keeps the formats streamable and diffable. Readers
validate eagerly and report the offending line number; writers emit a fixed
key order so identical data always produces identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .ensemble import PredictionSet
from .errors import DataError, IntegrityError, InvalidSpansError, ParseError
from .preprocess import Lang
from .spans import Span

SCHEMAS = ("classify", "stance", "ner", "norm")


@dataclass(frozen=True)
class TermAnnotation:
    """A span plus the formal term it normalizes to."""

    span: Span
    term_id: str
    term_text: str = ""


@dataclass(frozen=True)
class LabeledRecord:
    id: str
    text: str
    lang: Lang
    claim: str | None = None
    gold_label: str | None = None
    gold_spans: tuple[Span, ...] | None = None
    gold_terms: tuple[TermAnnotation, ...] | None = None


def _span_to_dict(span: Span) -> dict:
    return {"start": span.start, "end": span.end, "text": span.text, "category": span.category}


def _span_from_dict(obj: dict, text: str | None, where: str) -> Span:
    extra = set(obj) - {"start", "end", "text", "category", "term_id", "term_text"}
    if extra:
        raise InvalidSpansError(f"{where}: unknown span fields {sorted(extra)}")
    try:
        start, end = int(obj["start"]), int(obj["end"])
    except (KeyError, TypeError, ValueError):
        raise InvalidSpansError(f"{where}: span needs integer start and end") from None
    surface = obj.get("text")
    if text is not None:
        if not 0 <= start < end <= len(text):
            raise InvalidSpansError(f"{where}: span ({start}, {end}) out of bounds")
        slice_ = text[start:end]
        if surface is None:
            surface = slice_
        elif surface != slice_:
            raise InvalidSpansError(
                f"{where}: span text {surface!r} != source slice {slice_!r}"
            )
    return Span(start, end, surface or "", str(obj.get("category", "")))


def _record_to_dict(record: LabeledRecord) -> dict:
    obj: dict = {"id": record.id, "text": record.text, "lang": record.lang.value}
    if record.claim is not None:
        obj["claim"] = record.claim
    if record.gold_label is not None:
        obj["gold_label"] = record.gold_label
    if record.gold_spans is not None:
        obj["gold_spans"] = [_span_to_dict(s) for s in record.gold_spans]
    if record.gold_terms is not None:
        obj["gold_terms"] = [
            dict(_span_to_dict(t.span), term_id=t.term_id, term_text=t.term_text)
            for t in record.gold_terms
        ]
    return obj


_RECORD_FIELDS = {"id", "text", "lang", "claim", "gold_label", "gold_spans", "gold_terms"}


def _record_from_dict(obj: dict, schema: str, where: str) -> LabeledRecord:
    extra = set(obj) - _RECORD_FIELDS
    if extra:
        raise DataError(f"unknown record fields {sorted(extra)}")
    for name in ("id", "text"):
        if not isinstance(obj.get(name), str):
            raise DataError(f"field {name!r} must be a string")
    if not obj["id"]:
        raise DataError("field 'id' must be non-empty")
    try:
        lang = Lang(obj.get("lang"))
    except ValueError:
        raise DataError(f"unknown lang {obj.get('lang')!r}") from None
    text = obj["text"]
    claim = obj.get("claim")
    if schema == "stance" and not claim:
        raise DataError("stance records need a non-empty 'claim'")
    gold_spans = None
    if obj.get("gold_spans") is not None:
        gold_spans = tuple(
            _span_from_dict(s, text, where) for s in obj["gold_spans"]
        )
    gold_terms = None
    if obj.get("gold_terms") is not None:
        gold_terms = tuple(
            TermAnnotation(
                _span_from_dict(t, text, where),
                str(t.get("term_id", "")),
                str(t.get("term_text", "")),
            )
            for t in obj["gold_terms"]
        )
        for term in gold_terms:
            if not term.term_id:
                raise DataError("gold_terms entries need a non-empty 'term_id'")
    gold_label = obj.get("gold_label")
    if gold_label is not None and not isinstance(gold_label, str):
        raise DataError("field 'gold_label' must be a string")
    return LabeledRecord(obj["id"], text, lang, claim, gold_label, gold_spans, gold_terms)


def _dumps(obj: dict) -> str:
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def _parse_lines(path: str) -> Iterable[tuple[int, dict]]:
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(path, line_no, f"invalid JSON: {exc.msg}") from None
            if not isinstance(obj, dict):
                raise ParseError(path, line_no, "expected a JSON object")
            yield line_no, obj


def read_records(path: str, schema: str = "classify") -> list[LabeledRecord]:
    """Parse and validate a record file; line numbers appear in every error."""
    if schema not in SCHEMAS:
        raise ParseError(path, 0, f"unknown schema {schema!r}")
    records: list[LabeledRecord] = []
    seen: set[str] = set()
    for line_no, obj in _parse_lines(path):
        try:
            record = _record_from_dict(obj, schema, f"{path}:{line_no}")
        except DataError as exc:
            raise ParseError(path, line_no, str(exc)) from None
        if record.id in seen:
            raise IntegrityError(f"{path}:{line_no}: duplicate record id {record.id!r}")
        seen.add(record.id)
        records.append(record)
    return records


def write_records(records: Sequence[LabeledRecord], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for record in records:
            fh.write(_dumps(_record_to_dict(record)) + "\n")


def read_label_predictions(path: str) -> PredictionSet:
    """Read one model's label predictions: lines of model_id, id, label."""
    labels: dict[str, str] = {}
    model_id: str | None = None
    for line_no, obj in _parse_lines(path):
        extra = set(obj) - {"model_id", "id", "label"}
        if extra:
            raise ParseError(path, line_no, f"unknown fields {sorted(extra)}")
        try:
            rid, label, mid = str(obj["id"]), str(obj["label"]), str(obj["model_id"])
        except KeyError as exc:
            raise ParseError(path, line_no, f"missing field {exc}") from None
        if model_id is None:
            model_id = mid
        elif mid != model_id:
            raise IntegrityError(f"{path}:{line_no}: mixed model ids {model_id!r} and {mid!r}")
        if rid in labels:
            raise IntegrityError(f"{path}:{line_no}: duplicate record id {rid!r}")
        labels[rid] = label
    return PredictionSet(model_id or "", labels)


def write_label_predictions(predictions: PredictionSet, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rid in sorted(predictions.labels):
            obj = {"model_id": predictions.model_id, "id": rid, "label": predictions.labels[rid]}
            fh.write(_dumps(obj) + "\n")


def read_span_predictions(path: str) -> tuple[str, dict[str, list[Span]]]:
    """Read span predictions: lines of model_id, id, spans."""
    spans: dict[str, list[Span]] = {}
    model_id: str | None = None
    for line_no, obj in _parse_lines(path):
        extra = set(obj) - {"model_id", "id", "spans"}
        if extra:
            raise ParseError(path, line_no, f"unknown fields {sorted(extra)}")
        try:
            rid, mid, rows = str(obj["id"]), str(obj["model_id"]), obj["spans"]
        except KeyError as exc:
            raise ParseError(path, line_no, f"missing field {exc}") from None
        if model_id is None:
            model_id = mid
        elif mid != model_id:
            raise IntegrityError(f"{path}:{line_no}: mixed model ids {model_id!r} and {mid!r}")
        if rid in spans:
            raise IntegrityError(f"{path}:{line_no}: duplicate record id {rid!r}")
        try:
            spans[rid] = [_span_from_dict(s, None, f"{path}:{line_no}") for s in rows]
        except InvalidSpansError as exc:
            raise ParseError(path, line_no, str(exc)) from None
    return model_id or "", spans


def write_span_predictions(model_id: str, spans: dict[str, Sequence[Span]], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rid in sorted(spans):
            obj = {
                "model_id": model_id,
                "id": rid,
                "spans": [_span_to_dict(s) for s in spans[rid]],
            }
            fh.write(_dumps(obj) + "\n")


def read_term_predictions(path: str) -> tuple[str, dict[str, list[tuple[Span, str]]]]:
    """Read normalization predictions: lines of model_id, id, terms."""
    terms: dict[str, list[tuple[Span, str]]] = {}
    model_id: str | None = None
    for line_no, obj in _parse_lines(path):
        extra = set(obj) - {"model_id", "id", "terms"}
        if extra:
            raise ParseError(path, line_no, f"unknown fields {sorted(extra)}")
        try:
            rid, mid, rows = str(obj["id"]), str(obj["model_id"]), obj["terms"]
        except KeyError as exc:
            raise ParseError(path, line_no, f"missing field {exc}") from None
        if model_id is None:
            model_id = mid
        elif mid != model_id:
            raise IntegrityError(f"{path}:{line_no}: mixed model ids {model_id!r} and {mid!r}")
        if rid in terms:
            raise IntegrityError(f"{path}:{line_no}: duplicate record id {rid!r}")
        parsed = []
        for row in rows:
            try:
                span = _span_from_dict(row, None, f"{path}:{line_no}")
            except InvalidSpansError as exc:
                raise ParseError(path, line_no, str(exc)) from None
            term_id = str(row.get("term_id", ""))
            if not term_id:
                raise ParseError(path, line_no, "terms entries need a non-empty 'term_id'")
            parsed.append((span, term_id))
        terms[rid] = parsed
    return model_id or "", terms


def write_term_predictions(
    model_id: str, terms: dict[str, Sequence[tuple[Span, str]]], path: str
) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rid in sorted(terms):
            obj = {
                "model_id": model_id,
                "id": rid,
                "terms": [dict(_span_to_dict(s), term_id=t) for s, t in terms[rid]],
            }
            fh.write(_dumps(obj) + "\n")
