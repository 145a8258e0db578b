"""Command-line surface wiring the library modules into pipelines.

Subcommands: preprocess, train, predict, ensemble, eval-cls, eval-ner,
eval-norm, agreement. Exit codes: 0 ok, 2 usage, 3 data error, 4 numeric
divergence. All outputs are deterministic functions of the inputs and flags
(no timestamps), so reruns with identical seeds are byte-identical.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .classifier import (
    DEFAULT_DIM,
    TrainConfig,
    featurize,
    load_model,
    predict_proba,
    save_model,
    train,
)
from .ensemble import PredictionSet, ensemble_predictions
from .errors import CoverageError, DataError, DivergenceError, TweetpipeError, UsageError
from .labels import JOINT_LABEL_NAMES, PREMISE_ORDER, STANCE_ORDER, decide, parse_joint_label
from .metrics import (
    agreement_matrix,
    classification_metrics,
    confusion,
    normalization_metrics,
    span_metrics,
)
from .normalizer import (
    DEFAULT_MAX_DIST,
    build_lexicon,
    load_lexicon,
    normalize_mention,
    save_lexicon,
)
from .preprocess import Lang, format_claim_input, map_span_to_normalized, normalize_text
from .records import (
    LabeledRecord,
    TermAnnotation,
    read_label_predictions,
    read_records,
    read_span_predictions,
    read_term_predictions,
    write_label_predictions,
    write_records,
    write_span_predictions,
    write_term_predictions,
)
from .report import EvalReport


def _flags(args: argparse.Namespace) -> dict[str, object]:
    """The exact flag set used, for report auditability."""
    return {k: v for k, v in vars(args).items() if k != "func" and v is not None}


def _prepare_text(record: LabeledRecord, lang: Lang | None = None) -> str:
    """Classifier input: normalized text, claim-conditioned when a claim exists."""
    normalized = normalize_text(record.text, lang or record.lang).normalized
    if record.claim:
        return format_claim_input(record.claim, normalized)
    return normalized


def cmd_preprocess(args: argparse.Namespace) -> None:
    records = read_records(args.input, args.schema)
    override = Lang(args.lang) if args.lang else None
    out = []
    for r in records:
        lang = override or r.lang
        nt = normalize_text(r.text, lang)
        spans = terms = None
        if r.gold_spans is not None:
            spans = tuple(map_span_to_normalized(s, nt) for s in r.gold_spans)
        if r.gold_terms is not None:
            terms = tuple(
                TermAnnotation(map_span_to_normalized(t.span, nt), t.term_id, t.term_text)
                for t in r.gold_terms
            )
        text = nt.normalized
        if args.claim_format:
            if spans is not None or terms is not None:
                raise DataError(
                    f"record {r.id!r}: claim formatting would invalidate span offsets"
                )
            if not r.claim:
                raise DataError(f"record {r.id!r} has no claim to format")
            text = format_claim_input(r.claim, text)
        out.append(LabeledRecord(r.id, text, lang, r.claim, r.gold_label, spans, terms))
    write_records(out, args.out)


def _gold_label(record: LabeledRecord) -> str:
    if record.gold_label is None:
        raise DataError(f"record {record.id!r} has no gold_label")
    return record.gold_label


def cmd_train(args: argparse.Namespace) -> None:
    if args.task == "lexicon":
        pairs = []
        for r in read_records(args.input, "norm"):
            if r.gold_terms is None:
                raise DataError(f"record {r.id!r} has no gold_terms")
            for t in r.gold_terms:
                pairs.append((t.span.text, t.term_id, t.term_text or t.term_id))
        save_lexicon(build_lexicon(pairs), args.out)
        return
    records = read_records(args.input, "classify")
    if args.task == "joint":
        classes = list(JOINT_LABEL_NAMES)
        indices = [parse_joint_label(_gold_label(r)).index for r in records]
    else:
        classes = sorted({_gold_label(r) for r in records})
        lookup = {label: i for i, label in enumerate(classes)}
        indices = [lookup[r.gold_label] for r in records]
    data = [
        (featurize(_prepare_text(r), args.dim), y) for r, y in zip(records, indices)
    ]
    cfg = TrainConfig(
        epochs=args.epochs,
        learning_rate=args.lr,
        seed=args.seed,
        l2=args.l2,
        batch_size=args.batch_size,
    )
    params = train(data, cfg, len(classes))
    save_model(params, classes, args.out)


def _predict_terms(args: argparse.Namespace) -> None:
    if not args.lexicon:
        raise UsageError("--task norm needs --lexicon")
    lexicon = load_lexicon(args.lexicon)
    by_id = {r.id: r for r in read_records(args.input, "norm")}
    if args.spans:
        _, span_map = read_span_predictions(args.spans)
    else:
        span_map = {
            rid: list(r.gold_spans) if r.gold_spans is not None else []
            for rid, r in by_id.items()
        }
    predictions = {}
    for rid in sorted(span_map):
        record = by_id.get(rid)
        if record is None:
            raise CoverageError(f"span predictions mention unknown record id {rid!r}")
        terms = []
        for span in span_map[rid]:
            mention = span.text or record.text[span.start : span.end]
            hit = normalize_mention(mention, lexicon, args.max_dist)
            if hit is not None:
                terms.append((span, hit[0]))
        predictions[rid] = terms
    write_term_predictions(args.model_id or "lexicon", predictions, args.out)


def cmd_predict(args: argparse.Namespace) -> None:
    if args.task == "norm":
        _predict_terms(args)
        return
    if not args.model:
        raise UsageError(f"--task {args.task} needs --model")
    params, classes = load_model(args.model)
    records = read_records(args.input, "classify")
    if args.task in ("joint", "stance", "premise") and classes != list(JOINT_LABEL_NAMES):
        raise DataError(
            f"model classes {classes!r} are not the joint label space; "
            f"--task {args.task} unavailable"
        )
    labels = {}
    for r in records:
        probs = predict_proba(params, featurize(_prepare_text(r), params.dim))
        if args.task == "stance":
            labels[r.id] = decide(probs, "stance").value
        elif args.task == "premise":
            labels[r.id] = decide(probs, "premise").value
        else:
            labels[r.id] = classes[int(np.argmax(probs))]
    model_id = args.model_id or os.path.splitext(os.path.basename(args.model))[0]
    write_label_predictions(PredictionSet(model_id, labels), args.out)


def cmd_ensemble(args: argparse.Namespace) -> None:
    if len(args.pred) < 2:
        raise UsageError("ensemble needs at least two --pred files")
    sets = [read_label_predictions(p) for p in args.pred]
    combined = ensemble_predictions(sets)
    write_label_predictions(PredictionSet(args.model_id, combined.labels), args.out)


def _extract_label(raw: str, task: str) -> str:
    if task == "label":
        return raw
    allowed = {s.value for s in (STANCE_ORDER if task == "stance" else PREMISE_ORDER)}
    if raw in allowed:
        return raw
    joint = parse_joint_label(raw)
    return joint.stance.value if task == "stance" else joint.premise.value


def cmd_eval_cls(args: argparse.Namespace) -> None:
    records = read_records(args.gold, "classify")
    predictions = read_label_predictions(args.pred)
    gold = {r.id: _extract_label(_gold_label(r), args.task) for r in records}
    if args.task == "stance":
        classes = [s.value for s in STANCE_ORDER]
    elif args.task == "premise":
        classes = [p.value for p in PREMISE_ORDER]
    else:
        classes = sorted(set(gold.values()) | set(predictions.labels.values()))
    cm = confusion(gold, predictions.labels, classes)
    rows = [
        ("micro", classification_metrics(cm, "micro")),
        ("macro", classification_metrics(cm, "macro")),
    ]
    rows.extend(
        (f"class:{c}", classification_metrics(cm, "per_class", c)) for c in classes
    )
    report = EvalReport("classification", _flags(args), rows, confusion=cm)
    report.write(args.out)
    sys.stdout.write(report.to_text())


def cmd_eval_ner(args: argparse.Namespace) -> None:
    gold = {}
    for r in read_records(args.gold, "ner"):
        if r.gold_spans is None:
            raise DataError(f"record {r.id!r} has no gold_spans")
        gold[r.id] = list(r.gold_spans)
    _, pred = read_span_predictions(args.pred)
    m = span_metrics(gold, pred, args.mode)
    report = EvalReport("span", _flags(args), [(args.mode, m)])
    report.write(args.out)
    sys.stdout.write(report.to_text())


def cmd_eval_norm(args: argparse.Namespace) -> None:
    gold = {}
    for r in read_records(args.gold, "norm"):
        if r.gold_terms is None:
            raise DataError(f"record {r.id!r} has no gold_terms")
        gold[r.id] = [(t.span, t.term_id) for t in r.gold_terms]
    _, pred = read_term_predictions(args.pred)
    m = normalization_metrics(gold, pred, args.mode)
    report = EvalReport("normalization", _flags(args), [(args.mode, m)])
    report.write(args.out)
    sys.stdout.write(report.to_text())


def cmd_agreement(args: argparse.Namespace) -> None:
    if len(args.pred) < 2:
        raise UsageError("agreement needs at least two --pred files")
    sets = [read_label_predictions(p) for p in args.pred]
    report = EvalReport("agreement", _flags(args), [], agreement=agreement_matrix(sets))
    report.write(args.out)
    sys.stdout.write(report.to_text())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tweetpipe",
        description="Preprocess, train, predict, ensemble and evaluate "
        "social-media text pipelines.",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("preprocess", help="normalize tweet text, remapping span offsets")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--lang", choices=[l.value for l in Lang], help="override record language")
    p.add_argument("--schema", choices=["classify", "stance", "ner", "norm"], default="classify")
    p.add_argument("--claim-format", action="store_true", help="apply the claim template")
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("train", help="train the toy classifier or build a lexicon")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--task", choices=["label", "joint", "lexicon"], default="label")
    p.add_argument("--epochs", type=int, default=10)
    p.add_argument("--lr", type=float, default=0.1)
    p.add_argument("--l2", type=float, default=1e-4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dim", type=int, default=DEFAULT_DIM)
    p.add_argument("--batch-size", type=int, default=16)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="predict labels or normalized terms")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--task", choices=["label", "joint", "stance", "premise", "norm"],
                   default="label")
    p.add_argument("--model", help="model file from `train`")
    p.add_argument("--lexicon", help="lexicon file from `train --task lexicon`")
    p.add_argument("--spans", help="span prediction file (default: gold spans from --input)")
    p.add_argument("--max-dist", type=float, default=DEFAULT_MAX_DIST)
    p.add_argument("--model-id", help="model id written to the prediction file")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("ensemble", help="majority-vote prediction files")
    p.add_argument("--pred", action="append", required=True,
                   help="label prediction file; repeat per model, order sets tie priority")
    p.add_argument("--out", required=True)
    p.add_argument("--model-id", default="ensemble")
    p.set_defaults(func=cmd_ensemble)

    p = sub.add_parser("eval-cls", help="classification metrics and confusion matrix")
    p.add_argument("--gold", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--task", choices=["label", "stance", "premise"], default="label")
    p.set_defaults(func=cmd_eval_cls)

    p = sub.add_parser("eval-ner", help="strict/relaxed span metrics")
    p.add_argument("--gold", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--mode", choices=["strict", "relaxed"], default="strict")
    p.set_defaults(func=cmd_eval_ner)

    p = sub.add_parser("eval-norm", help="concept normalization metrics")
    p.add_argument("--gold", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--mode", choices=["strict", "relaxed"], default="strict")
    p.set_defaults(func=cmd_eval_norm)

    p = sub.add_parser("agreement", help="pairwise Cohen's kappa between prediction files")
    p.add_argument("--pred", action="append", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_agreement)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except DivergenceError as exc:
        print(f"divergence: {exc}", file=sys.stderr)
        return 4
    except (DataError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
