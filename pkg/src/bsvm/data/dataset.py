from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class DataError(ValueError):
    """Malformed or inconsistent input data."""


@dataclass(frozen=True, eq=False)
class LabeledDataset:
    vectors: np.ndarray
    labels: tuple
    beliefs: np.ndarray | None = None

    def __post_init__(self):
        X = np.asarray(self.vectors, dtype=np.float64)
        if X.ndim == 1 and X.size == 0:
            X = X.reshape(0, 0)
        if X.ndim != 2:
            raise DataError(f"feature vectors must form a 2-D array, got shape {X.shape}")
        labels = tuple(self.labels)
        if len(labels) != X.shape[0]:
            raise DataError(f"{len(labels)} labels for {X.shape[0]} vectors")
        object.__setattr__(self, "vectors", X)
        object.__setattr__(self, "labels", labels)
        if self.beliefs is not None:
            m = np.asarray(self.beliefs, dtype=np.float64).reshape(-1)
            if m.shape[0] != X.shape[0]:
                raise DataError(f"{m.shape[0]} beliefs for {X.shape[0]} vectors")
            if not np.all(m > 0):
                raise DataError("beliefs must be positive")
            object.__setattr__(self, "beliefs", m)

    def __len__(self):
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    @property
    def classes(self) -> tuple:
        return tuple(sorted(set(self.labels)))

    @property
    def label_index(self) -> dict:
        return {label: k for k, label in enumerate(self.classes)}

    @property
    def label_array(self) -> np.ndarray:
        return np.array(self.labels, dtype=object)

    def subset(self, idx) -> "LabeledDataset":
        idx = np.asarray(idx, dtype=np.int64)
        labels = tuple(self.labels[i] for i in idx)
        beliefs = None if self.beliefs is None else self.beliefs[idx]
        return LabeledDataset(self.vectors[idx], labels, beliefs)

    def relabel(self, mapping) -> "LabeledDataset":
        return LabeledDataset(self.vectors, tuple(mapping[lab] for lab in self.labels), self.beliefs)

    def equals(self, other: "LabeledDataset") -> bool:
        if self.labels != other.labels or self.vectors.shape != other.vectors.shape:
            return False
        if not np.array_equal(self.vectors, other.vectors):
            return False
        if (self.beliefs is None) != (other.beliefs is None):
            return False
        return self.beliefs is None or np.array_equal(self.beliefs, other.beliefs)


def split(dataset: LabeledDataset, test_fraction: float, seed: int = 0):
    """Stratified train/test split; each class keeps at least one sample on each side."""
    if not 0 < test_fraction < 1:
        raise DataError(f"test_fraction must lie strictly between 0 and 1, got {test_fraction}")
    rng = np.random.default_rng(seed)
    labels = dataset.label_array
    train_idx, test_idx = [], []
    for label in dataset.classes:
        idx = np.flatnonzero(labels == label)
        if idx.size < 2:
            raise DataError(f"class {label!r} has {idx.size} sample(s); stratified split needs at least 2")
        idx = rng.permutation(idx)
        n_test = int(np.floor(test_fraction * idx.size + 0.5))
        n_test = min(max(n_test, 1), idx.size - 1)
        test_idx.extend(idx[:n_test].tolist())
        train_idx.extend(idx[n_test:].tolist())
    return dataset.subset(sorted(train_idx)), dataset.subset(sorted(test_idx))
