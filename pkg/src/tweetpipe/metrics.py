"""Evaluation computations: confusion matrices, P/R/F1, Cohen's kappa,
strict/relaxed span matching and concept-normalization scoring.

All counting is plain integer arithmetic and all aggregation is pooled
(micro) unless stated otherwise; 0/0 ratios are 0 everywhere, the standard
scorer convention. Span matching is greedy in offset order, which is optimal
here because spans within one side are non-overlapping and sorted: the
earliest compatible gold can always be exchanged into a maximum matching.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Sequence

from .ensemble import PredictionSet
from .errors import (
    DataError,
    DegenerateMarginalsError,
    KeyMismatchError,
    UnknownLabelError,
)
from .spans import Span, check_spans_disjoint

KAPPA_EPS = 1e-12

STRICT = "strict"
RELAXED = "relaxed"


@dataclass(frozen=True)
class Metrics:
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class ConfusionMatrix:
    """Square count matrix, rows = gold, columns = predicted."""

    classes: tuple[str, ...]
    counts: tuple[tuple[int, ...], ...]

    def total(self) -> int:
        return sum(sum(row) for row in self.counts)


@dataclass(frozen=True)
class AgreementMatrix:
    """Pairwise Cohen's kappa between models; symmetric, unit diagonal."""

    model_ids: tuple[str, ...]
    kappas: tuple[tuple[float, ...], ...]


def _ratio(num: int, den: int) -> float:
    return num / den if den else 0.0


def _f1(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def _prf(tp: int, num_pred: int, num_gold: int) -> Metrics:
    precision = _ratio(tp, num_pred)
    recall = _ratio(tp, num_gold)
    return Metrics(precision, recall, _f1(precision, recall))


def _check_same_keys(gold: Mapping[str, object], pred: Mapping[str, object]) -> None:
    if set(gold) != set(pred):
        diff = sorted(set(gold) ^ set(pred))
        raise KeyMismatchError(f"gold and predictions disagree on record ids: {', '.join(diff)}")


def confusion(
    gold: Mapping[str, str], pred: Mapping[str, str], classes: Sequence[str]
) -> ConfusionMatrix:
    """Count records per (gold, predicted) label pair."""
    _check_same_keys(gold, pred)
    index = {label: i for i, label in enumerate(classes)}
    if len(index) != len(classes):
        raise DataError("class list contains duplicates")
    counts = [[0] * len(classes) for _ in classes]
    for rid, gold_label in gold.items():
        pred_label = pred[rid]
        for label in (gold_label, pred_label):
            if label not in index:
                raise UnknownLabelError(f"label {label!r} for record {rid!r} not in class list")
        counts[index[gold_label]][index[pred_label]] += 1
    return ConfusionMatrix(tuple(classes), tuple(tuple(row) for row in counts))


def _per_class_counts(cm: ConfusionMatrix, i: int) -> tuple[int, int, int]:
    tp = cm.counts[i][i]
    fp = sum(cm.counts[g][i] for g in range(len(cm.classes))) - tp
    fn = sum(cm.counts[i]) - tp
    return tp, fp, fn


def classification_metrics(
    cm: ConfusionMatrix, mode: str = "micro", label: str | None = None
) -> Metrics:
    """P/R/F1 from a confusion matrix.

    ``micro`` pools TP/FP/FN over classes (equal to accuracy for single-label
    multiclass data, hence P = R = F1); ``macro`` is the unweighted mean of
    the per-class values; ``per_class`` scores one label.
    """
    if mode == "per_class":
        if label is None:
            raise DataError("per_class mode needs a label")
        if label not in cm.classes:
            raise UnknownLabelError(f"label {label!r} not in confusion matrix classes")
        tp, fp, fn = _per_class_counts(cm, cm.classes.index(label))
        return _prf(tp, tp + fp, tp + fn)
    if mode == "micro":
        tp = fp = fn = 0
        for i in range(len(cm.classes)):
            tpi, fpi, fni = _per_class_counts(cm, i)
            tp, fp, fn = tp + tpi, fp + fpi, fn + fni
        return _prf(tp, tp + fp, tp + fn)
    if mode == "macro":
        per_class = [classification_metrics(cm, "per_class", c) for c in cm.classes]
        n = len(per_class)
        if n == 0:
            return Metrics(0.0, 0.0, 0.0)
        return Metrics(
            sum(m.precision for m in per_class) / n,
            sum(m.recall for m in per_class) / n,
            sum(m.f1 for m in per_class) / n,
        )
    raise DataError(f"unknown mode {mode!r}, expected micro, macro or per_class")


def cohens_kappa(a: Mapping[str, str], b: Mapping[str, str]) -> float:
    """Chance-corrected agreement (p_o - p_e) / (1 - p_e) between two label maps."""
    _check_same_keys(a, b)
    n = len(a)
    if n == 0:
        raise DataError("cohens_kappa needs at least one record")
    observed = sum(1 for rid in a if a[rid] == b[rid]) / n
    if observed == 1.0:
        return 1.0
    freq_a = Counter(a.values())
    freq_b = Counter(b.values())
    expected = sum(
        (freq_a[label] / n) * (freq_b[label] / n)
        for label in sorted(set(freq_a) | set(freq_b))
    )
    if expected >= 1.0 - KAPPA_EPS:
        raise DegenerateMarginalsError(
            f"chance agreement {expected!r} makes kappa undefined (observed {observed!r})"
        )
    return (observed - expected) / (1.0 - expected)


def agreement_matrix(sets: Sequence[PredictionSet]) -> AgreementMatrix:
    """Pairwise kappas over prediction sets; diagonal is exactly 1."""
    if len(sets) < 2:
        raise DataError("agreement matrix needs at least two prediction sets")
    n = len(sets)
    kappas = [[1.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            kappas[i][j] = kappas[j][i] = cohens_kappa(sets[i].labels, sets[j].labels)
    return AgreementMatrix(
        tuple(ps.model_id for ps in sets), tuple(tuple(row) for row in kappas)
    )


def _validate_mode(mode: str) -> None:
    if mode not in (STRICT, RELAXED):
        raise DataError(f"unknown mode {mode!r}, expected {STRICT!r} or {RELAXED!r}")


def _spans_match(gold: Span, pred: Span, mode: str) -> bool:
    if mode == STRICT:
        return gold.start == pred.start and gold.end == pred.end
    return gold.overlaps(pred)


def _greedy_matches(
    gold: Sequence[Span],
    pred: Sequence[Span],
    mode: str,
    gold_keys: Sequence[str] | None = None,
    pred_keys: Sequence[str] | None = None,
) -> int:
    """One-to-one greedy matching in offset order; optionally key-constrained."""
    taken = [False] * len(gold)
    matched = 0
    for pi, p in enumerate(pred):
        for gi, g in enumerate(gold):
            if taken[gi] or not _spans_match(g, p, mode):
                continue
            if gold_keys is not None and gold_keys[gi] != pred_keys[pi]:
                continue
            taken[gi] = True
            matched += 1
            break
    return matched


def span_metrics(
    gold: Mapping[str, Sequence[Span]],
    pred: Mapping[str, Sequence[Span]],
    mode: str,
) -> Metrics:
    """Pooled P/R/F1 over records; strict needs identical offsets, relaxed
    needs at least one overlapping character."""
    _validate_mode(mode)
    _check_same_keys(gold, pred)
    tp = num_gold = num_pred = 0
    for rid in sorted(gold):
        gold_spans = check_spans_disjoint(list(gold[rid]), f"gold record {rid!r}")
        pred_spans = check_spans_disjoint(list(pred[rid]), f"predicted record {rid!r}")
        tp += _greedy_matches(gold_spans, pred_spans, mode)
        num_gold += len(gold_spans)
        num_pred += len(pred_spans)
    return _prf(tp, num_pred, num_gold)


def normalization_metrics(
    gold: Mapping[str, Sequence[tuple[Span, str]]],
    pred: Mapping[str, Sequence[tuple[Span, str]]],
    mode: str,
) -> Metrics:
    """Like span_metrics, but a match additionally requires the predicted
    term id to equal the matched gold span's term id.

    Oracle-style evaluation is the caller's choice of inputs: feed the gold
    spans as the predictions' spans and only term errors remain.
    """
    _validate_mode(mode)
    _check_same_keys(gold, pred)
    tp = num_gold = num_pred = 0
    for rid in sorted(gold):
        gold_sorted = sorted(gold[rid], key=lambda pair: (pair[0].start, pair[0].end))
        pred_sorted = sorted(pred[rid], key=lambda pair: (pair[0].start, pair[0].end))
        check_spans_disjoint([pair[0] for pair in gold_sorted], f"gold record {rid!r}")
        check_spans_disjoint([pair[0] for pair in pred_sorted], f"predicted record {rid!r}")
        tp += _greedy_matches(
            [pair[0] for pair in gold_sorted],
            [pair[0] for pair in pred_sorted],
            mode,
            gold_keys=[pair[1] for pair in gold_sorted],
            pred_keys=[pair[1] for pair in pred_sorted],
        )
        num_gold += len(gold_sorted)
        num_pred += len(pred_sorted)
    return _prf(tp, num_pred, num_gold)
