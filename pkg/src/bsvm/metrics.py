"""Accuracy, macro precision/recall and confusion matrices."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class EvalReport:
    accuracy: float
    macro_precision: float
    macro_recall: float
    labels: tuple
    confusion: np.ndarray  # rows: truth, columns: prediction
    per_class: dict  # label -> (precision, recall)
    support: dict  # label -> number of true samples

    @property
    def total(self) -> int:
        return int(self.confusion.sum())


def evaluate(predictions, truth) -> EvalReport:
    """Score predictions. Precision with no predicted samples counts as 0.

    Macro averages run over the classes that occur in ``truth``.
    """
    predictions, truth = list(predictions), list(truth)
    if len(predictions) != len(truth):
        raise ValueError(f"{len(predictions)} predictions for {len(truth)} truth labels")
    if not truth:
        raise ValueError("cannot evaluate an empty prediction set")
    labels = tuple(sorted(set(truth) | set(predictions)))
    pos = {label: k for k, label in enumerate(labels)}
    confusion = np.zeros((len(labels), len(labels)), dtype=np.int64)
    for p, t in zip(predictions, truth):
        confusion[pos[t], pos[p]] += 1

    tp = np.diag(confusion)
    predicted = confusion.sum(axis=0)
    actual = confusion.sum(axis=1)
    per_class, support = {}, {}
    for k, label in enumerate(labels):
        precision = tp[k] / predicted[k] if predicted[k] else 0.0
        recall = tp[k] / actual[k] if actual[k] else 0.0
        per_class[label] = (float(precision), float(recall))
        support[label] = int(actual[k])
    present = [label for label in labels if support[label] > 0]
    return EvalReport(
        accuracy=float(tp.sum() / confusion.sum()),
        macro_precision=float(np.mean([per_class[c][0] for c in present])),
        macro_recall=float(np.mean([per_class[c][1] for c in present])),
        labels=labels,
        confusion=confusion,
        per_class=per_class,
        support=support,
    )


def report_rows(name: str, report: EvalReport, with_classes: bool = True) -> list:
    """Rows of ``(row name, accuracy, precision, recall, support)``."""
    rows = [(name, report.accuracy, report.macro_precision, report.macro_recall, report.total)]
    if with_classes:
        for label in report.labels:
            if report.support[label]:
                p, r = report.per_class[label]
                rows.append((f"  {label}", r, p, r, report.support[label]))
    return rows


def format_table(rows) -> str:
    head = ("", "Acc.%", "Precision%", "Recall%", "N")
    body = [(str(n), f"{100 * a:.2f}", f"{100 * p:.2f}", f"{100 * r:.2f}", str(s)) for n, a, p, r, s in rows]
    widths = [max(len(r[i]) for r in [head, *body]) for i in range(5)]

    def fmt(r):
        return "  ".join(c.ljust(w) if i == 0 else c.rjust(w) for i, (c, w) in enumerate(zip(r, widths)))

    return "\n".join([fmt(head), "-" * (sum(widths) + 8), *map(fmt, body)]) + "\n"


def format_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["row", "accuracy", "precision", "recall", "support"])
    for n, a, p, r, s in rows:
        w.writerow([n.strip(), repr(float(a)), repr(float(p)), repr(float(r)), s])
    return buf.getvalue()


def format_confusion(report: EvalReport) -> str:
    names = [str(label) for label in report.labels]
    w = max(max(map(len, names)), len(str(report.confusion.max())), 4)
    lines = [" " * w + " " + " ".join(n.rjust(w) for n in names)]
    for name, row in zip(names, report.confusion):
        lines.append(name.rjust(w) + " " + " ".join(str(v).rjust(w) for v in row))
    return "\n".join(lines) + "\n"
