"""Feature CSV files: ``label[,belief],f0,f1,...``.

The header is optional for labeled files. A header whose first column is ``f0``
marks an unlabeled table. Floats are written with ``repr`` so a save/load round
trip is exact.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .dataset import DataError, LabeledDataset


def _header(dim, labeled=True, beliefs=False):
    cols = ["label"] if labeled else []
    if beliefs:
        cols.append("belief")
    return cols + [f"f{k}" for k in range(dim)]


def read_feature_table(path):
    """Read a feature CSV; returns ``(labels or None, vectors, beliefs or None)``."""
    path = Path(path)
    with path.open(newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and any(cell.strip() for cell in r)]
    labeled, has_belief = True, False
    if rows and rows[0][0].strip() in ("label", "f0"):
        head = [c.strip() for c in rows[0]]
        labeled = head[0] == "label"
        has_belief = labeled and len(head) > 1 and head[1] == "belief"
        rows = rows[1:]
        lineno0 = 2
        width = len(head)
    else:
        lineno0 = 1
        width = len(rows[0]) if rows else 0
    skip = int(labeled) + int(has_belief)

    labels, beliefs = [], []
    X = np.empty((len(rows), max(width - skip, 0)))
    for r, row in enumerate(rows):
        lineno = lineno0 + r
        if len(row) != width:
            raise DataError(f"{path}: row {lineno} has {len(row)} columns, expected {width}")
        for col in range(skip, width):
            try:
                X[r, col - skip] = float(row[col])
            except ValueError:
                raise DataError(f"{path}: row {lineno}, column {col + 1}: "
                                f"non-numeric feature {row[col]!r}") from None
        if labeled:
            labels.append(row[0].strip())
        if has_belief:
            try:
                beliefs.append(float(row[1]))
            except ValueError:
                raise DataError(f"{path}: row {lineno}, column 2: non-numeric belief {row[1]!r}") from None
    if labeled and X.shape[1] == 0 and rows:
        raise DataError(f"{path}: rows carry no feature columns")
    return (labels if labeled else None), X, (np.array(beliefs) if has_belief else None)


def load_feature_csv(path) -> LabeledDataset:
    labels, X, beliefs = read_feature_table(path)
    if labels is None:
        raise DataError(f"{path}: file has no label column")
    return LabeledDataset(X, labels, beliefs)


def write_feature_table(path, X, labels=None, beliefs=None, dim: int | None = None):
    X = np.asarray(X, dtype=np.float64)
    if dim is None:
        dim = X.shape[1] if X.ndim == 2 else 0
    X = X.reshape(-1, dim) if X.size == 0 else X
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(_header(dim, labels is not None, beliefs is not None))
        for i in range(X.shape[0]):
            row = [] if labels is None else [labels[i]]
            if beliefs is not None:
                row.append(repr(float(beliefs[i])))
            row.extend(repr(float(v)) for v in X[i])
            w.writerow(row)


def save_feature_csv(dataset: LabeledDataset, path):
    write_feature_table(path, dataset.vectors, dataset.labels, dataset.beliefs, dataset.dim)
