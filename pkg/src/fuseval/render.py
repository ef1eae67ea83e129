"""Presentation of reports, confusion matrices, and comparison tables.

All renderers consume the structured documents returned by the service, so
text and structured artifacts always come from the same in-memory report.
Cells are rounded only here (default 2 decimals, round-half-to-even, the
same mode the f-string formatter applies).
"""

from __future__ import annotations

import json
from typing import Any, Mapping, Sequence

_REPORT_ROWS = (("0", "class0"), ("1", "class1"), ("macro avg", "macro_avg"), ("weighted avg", "weighted_avg"))


def _fmt(value: float, digits: int) -> str:
    return f"{value:.{digits}f}"


def render_report_text(report: Mapping[str, Any], digits: int = 2) -> str:
    """Aligned text table: class rows, accuracy line, then macro/weighted rows."""
    width = max(12, *(len(name) for name, _ in _REPORT_ROWS))

    def row(name: str, block: Mapping[str, Any]) -> str:
        return (
            f"{name:>{width}}  "
            f"{_fmt(block['precision'], digits):>9}  "
            f"{_fmt(block['recall'], digits):>8}  "
            f"{_fmt(block['f1_score'], digits):>8}  "
            f"{block['support']:>8}"
        )

    total = report["weighted_avg"]["support"]
    lines = [
        f"{'':>{width}}  precision    recall  f1-score   support",
        "",
        row("0", report["class0"]),
        row("1", report["class1"]),
        "",
        f"{'accuracy':>{width}}  {'':>9}  {'':>8}  {_fmt(report['accuracy'], digits):>8}  {total:>8}",
        row("macro avg", report["macro_avg"]),
        row("weighted avg", report["weighted_avg"]),
    ]
    return "\n".join(lines) + "\n"


def render_confusion_text(counts: Sequence[Sequence[int]]) -> str:
    width = max(len(str(c)) for row in counts for c in row)
    lines = ["confusion matrix (rows: true 0/1, columns: predicted 0/1)"]
    for row in counts:
        lines.append("  " + "  ".join(f"{c:>{width}}" for c in row))
    return "\n".join(lines) + "\n"


def render_confusion_csv(counts: Sequence[Sequence[int]]) -> str:
    lines = ["true_class,pred_0,pred_1"]
    for t, row in enumerate(counts):
        lines.append(f"{t},{row[0]},{row[1]}")
    return "\n".join(lines) + "\n"


def render_report_csv(report: Mapping[str, Any]) -> str:
    lines = ["row,precision,recall,f1_score,support"]
    for name, key in _REPORT_ROWS:
        block = report[key]
        lines.append(
            f"{key},{block['precision']!r},{block['recall']!r},"
            f"{block['f1_score']!r},{block['support']}"
        )
    lines.append(f"accuracy,,,{report['accuracy']!r},{report['weighted_avg']['support']}")
    return "\n".join(lines) + "\n"


def render_manifest_text(manifest: Mapping[str, Any]) -> str:
    lines = []
    for key, value in manifest.items():
        if isinstance(value, (dict, list)):
            value = json.dumps(value, sort_keys=True)
        lines.append(f"# {key}: {value}")
    return "\n".join(lines) + "\n"


def render_json(document: Mapping[str, Any]) -> str:
    return json.dumps(document, indent=2, sort_keys=True) + "\n"


_COMPARE_COLUMNS = ("accuracy", "macro_f1", "weighted_f1", "false_positives", "false_negatives")


def render_compare_text(rows: Sequence[Mapping[str, Any]], digits: int = 4) -> str:
    name_width = max(5, max(len(r["model_id"]) for r in rows))
    header = (
        f"{'model':<{name_width}}  {'accuracy':>9}  {'macro_f1':>9}  "
        f"{'weighted_f1':>11}  {'fp':>5}  {'fn':>5}"
    )
    lines = [header]
    for r in rows:
        lines.append(
            f"{r['model_id']:<{name_width}}  "
            f"{_fmt(r['accuracy'], digits):>9}  "
            f"{_fmt(r['macro_f1'], digits):>9}  "
            f"{_fmt(r['weighted_f1'], digits):>11}  "
            f"{r['false_positives']:>5}  "
            f"{r['false_negatives']:>5}"
        )
    return "\n".join(lines) + "\n"


def render_compare_csv(rows: Sequence[Mapping[str, Any]]) -> str:
    lines = ["model_id," + ",".join(_COMPARE_COLUMNS)]
    for r in rows:
        cells = [r["model_id"]] + [
            repr(r[c]) if isinstance(r[c], float) else str(r[c]) for c in _COMPARE_COLUMNS
        ]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"
