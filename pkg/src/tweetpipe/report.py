"""Evaluation reports, serialized for machines and for humans.

The machine form is line-delimited JSON (one args line, one line per metric
row, one line per matrix); the human form is a plain aligned table. Neither
contains timestamps, so identical inputs always serialize identically.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .metrics import AgreementMatrix, ConfusionMatrix, Metrics


@dataclass
class EvalReport:
    kind: str
    args: dict[str, object] = field(default_factory=dict)
    metric_rows: list[tuple[str, Metrics]] = field(default_factory=list)
    confusion: ConfusionMatrix | None = None
    agreement: AgreementMatrix | None = None

    def to_json_lines(self) -> str:
        lines = [json.dumps({"kind": self.kind, "args": self.args}, ensure_ascii=False)]
        for name, m in self.metric_rows:
            lines.append(
                json.dumps(
                    {"metric": name, "precision": m.precision, "recall": m.recall, "f1": m.f1},
                    ensure_ascii=False,
                )
            )
        if self.confusion is not None:
            lines.append(
                json.dumps(
                    {
                        "confusion": {
                            "classes": list(self.confusion.classes),
                            "counts": [list(row) for row in self.confusion.counts],
                        }
                    },
                    ensure_ascii=False,
                )
            )
        if self.agreement is not None:
            lines.append(
                json.dumps(
                    {
                        "agreement": {
                            "model_ids": list(self.agreement.model_ids),
                            "kappas": [list(row) for row in self.agreement.kappas],
                        }
                    },
                    ensure_ascii=False,
                )
            )
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        out = [f"{self.kind} report"]
        if self.metric_rows:
            width = max(len(name) for name, _ in self.metric_rows)
            out.append(f"  {'':<{width}}  {'P':>8}  {'R':>8}  {'F1':>8}")
            for name, m in self.metric_rows:
                out.append(
                    f"  {name:<{width}}  {m.precision:>8.4f}  {m.recall:>8.4f}  {m.f1:>8.4f}"
                )
        if self.confusion is not None:
            out.append("  confusion (rows gold, cols predicted)")
            out.extend(_grid(self.confusion.classes, self.confusion.counts, "d"))
        if self.agreement is not None:
            out.append("  agreement (Cohen's kappa)")
            out.extend(_grid(self.agreement.model_ids, self.agreement.kappas, ".4f"))
        flags = " ".join(f"{k}={v}" for k, v in self.args.items())
        out.append(f"  args: {flags}")
        return "\n".join(out) + "\n"

    def write(self, path: str) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_json_lines())


def _grid(names, rows, spec: str) -> list[str]:
    cells = [[format(value, spec) for value in row] for row in rows]
    width = max(len(n) for n in names)
    cell_width = max(
        [len(c) for row in cells for c in row] + [len(n) for n in names]
    )
    header = "  ".join(f"{n:>{cell_width}}" for n in names)
    lines = [f"    {'':<{width}}  {header}"]
    for name, row in zip(names, cells):
        body = "  ".join(f"{c:>{cell_width}}" for c in row)
        lines.append(f"    {name:<{width}}  {body}")
    return lines
