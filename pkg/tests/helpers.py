"""Shared test utilities: independent brute-force oracles and synthetic data.

The oracles deliberately avoid the library code paths they check: metrics
are recomputed by direct counting and matching is maximized exhaustively.
"""

from __future__ import annotations

import random

from tweetpipe import JOINT_LABELS, LabeledRecord, Lang, Metrics, Span


def oracle_confusion_counts(gold: dict, pred: dict, classes) -> list[list[int]]:
    return [
        [sum(1 for r in gold if gold[r] == g and pred[r] == p) for p in classes]
        for g in classes
    ]


def oracle_class_counts(gold: dict, pred: dict, label: str) -> tuple[int, int, int]:
    tp = sum(1 for r in gold if gold[r] == label and pred[r] == label)
    fp = sum(1 for r in gold if gold[r] != label and pred[r] == label)
    fn = sum(1 for r in gold if gold[r] == label and pred[r] != label)
    return tp, fp, fn


def oracle_prf(tp: int, num_pred: int, num_gold: int) -> Metrics:
    p = tp / num_pred if num_pred else 0.0
    r = tp / num_gold if num_gold else 0.0
    f1 = 2 * p * r / (p + r) if p + r else 0.0
    return Metrics(p, r, f1)


def oracle_classification(gold: dict, pred: dict, classes, mode: str, label=None) -> Metrics:
    if mode == "per_class":
        tp, fp, fn = oracle_class_counts(gold, pred, label)
        return oracle_prf(tp, tp + fp, tp + fn)
    if mode == "micro":
        tp = fp = fn = 0
        for c in classes:
            tpc, fpc, fnc = oracle_class_counts(gold, pred, c)
            tp, fp, fn = tp + tpc, fp + fpc, fn + fnc
        return oracle_prf(tp, tp + fp, tp + fn)
    per = [oracle_classification(gold, pred, classes, "per_class", c) for c in classes]
    n = len(per)
    return Metrics(
        sum(m.precision for m in per) / n,
        sum(m.recall for m in per) / n,
        sum(m.f1 for m in per) / n,
    )


def oracle_kappa(a: dict, b: dict) -> float:
    n = len(a)
    p_o = sum(1 for r in a if a[r] == b[r]) / n
    labels = sorted(set(a.values()) | set(b.values()))
    p_e = sum(
        (sum(1 for v in a.values() if v == c) / n) * (sum(1 for v in b.values() if v == c) / n)
        for c in labels
    )
    return (p_o - p_e) / (1 - p_e)


def _compatible(g, p, mode: str) -> bool:
    if mode == "strict":
        return g.start == p.start and g.end == p.end
    return g.start < p.end and p.start < g.end


def oracle_max_matching(gold, pred, mode: str, gold_terms=None, pred_terms=None) -> int:
    """Exhaustive one-to-one maximum matching (sides are tiny)."""

    def rec(pi: int, used: int) -> int:
        if pi == len(pred):
            return 0
        best = rec(pi + 1, used)
        for gi in range(len(gold)):
            if used & (1 << gi) or not _compatible(gold[gi], pred[pi], mode):
                continue
            if gold_terms is not None and gold_terms[gi] != pred_terms[pi]:
                continue
            best = max(best, 1 + rec(pi + 1, used | (1 << gi)))
        return best

    return rec(0, 0)


def random_labels(rng: random.Random, num_records: int, num_classes: int) -> tuple[dict, dict]:
    classes = [f"c{i}" for i in range(num_classes)]
    gold = {f"r{i}": rng.choice(classes) for i in range(num_records)}
    pred = {f"r{i}": rng.choice(classes) for i in range(num_records)}
    return gold, pred


def random_span_set(rng: random.Random, max_spans: int = 4, limit: int = 40) -> list[Span]:
    """Random sorted non-overlapping spans inside [0, limit)."""
    k = rng.randint(0, max_spans)
    if k == 0:
        return []
    cuts = sorted(rng.sample(range(limit), 2 * k))
    return [Span(cuts[2 * i], cuts[2 * i + 1], category="ENT") for i in range(k)]


def synthetic_joint_records(
    rng: random.Random, count: int, vocab_per_class: int = 25
) -> list[LabeledRecord]:
    """Separable records: each joint label draws from its own token vocabulary."""
    vocabs = [
        [f"w{j}x{k}" for k in range(vocab_per_class)] for j in range(len(JOINT_LABELS))
    ]
    claims = ["face masks", "stay at home orders", "school closures"]
    records = []
    for i in range(count):
        j = rng.randrange(len(JOINT_LABELS))
        words = [rng.choice(vocabs[j]) for _ in range(rng.randint(5, 9))]
        records.append(
            LabeledRecord(
                id=f"t{i}",
                text=" ".join(words),
                lang=Lang.EN,
                claim=rng.choice(claims),
                gold_label=str(JOINT_LABELS[j]),
            )
        )
    return records
