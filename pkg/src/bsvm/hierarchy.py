"""Two-level recognizer: coarse class first, then identity within the chosen branch."""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .belief import DEFAULT_EPSILON
from .data.dataset import DataError, LabeledDataset
from .kernels import KernelSpec
from .multiclass import ConstantModel, OvoModel, predict_ovo_batch, train_ovo
from .solver import SolverConfig

# "#" opens a comment only at line start or after whitespace, so labels like "h#" survive
_COMMENT = re.compile(r"(^|\s)#.*$")


@dataclass(frozen=True)
class Taxonomy:
    coarse_of: dict

    def __post_init__(self):
        if not self.coarse_of:
            raise DataError("taxonomy is empty")

    @property
    def coarse_labels(self) -> tuple:
        return tuple(sorted(set(self.coarse_of.values())))

    @property
    def fine_labels(self) -> tuple:
        return tuple(sorted(self.coarse_of))

    def branch(self, coarse) -> tuple:
        return tuple(f for f in self.fine_labels if self.coarse_of[f] == coarse)


def parse_taxonomy(text: str, source: str = "<taxonomy>") -> Taxonomy:
    """Parse ``<fine> <coarse>`` lines; ``#`` starts a comment."""
    coarse_of = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = _COMMENT.sub("", line).strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise DataError(f"{source}:{lineno}: expected '<fine_label> <coarse_label>', got {line!r}")
        fine, coarse = parts
        if fine in coarse_of and coarse_of[fine] != coarse:
            raise DataError(f"{source}:{lineno}: fine label {fine!r} already mapped to "
                            f"{coarse_of[fine]!r}")
        coarse_of[fine] = coarse
    return Taxonomy(coarse_of)


def load_taxonomy(path) -> Taxonomy:
    path = Path(path)
    return parse_taxonomy(path.read_text(), str(path))


def format_taxonomy(taxonomy: Taxonomy) -> str:
    return "".join(f"{f} {taxonomy.coarse_of[f]}\n" for f in taxonomy.fine_labels)


@dataclass(frozen=True, eq=False)
class HierarchicalModel:
    level1: OvoModel | ConstantModel
    level2: dict
    taxonomy: Taxonomy

    @property
    def dim(self) -> int:
        return self.level1.dim

    @property
    def kernel(self) -> KernelSpec:
        for m in [self.level1, *self.level2.values()]:
            if isinstance(m, OvoModel):
                return m.kernel
        return None

    def submodels(self):
        yield "level1", self.level1
        for coarse in self.taxonomy.coarse_labels:
            yield f"level2[{coarse}]", self.level2[coarse]


def _fit(dataset, kernel, config, use_beliefs, epsilon, backend):
    classes = dataset.classes
    if len(classes) == 1:
        return ConstantModel(classes[0], dataset.dim)
    return train_ovo(dataset, kernel, config, use_beliefs, epsilon, backend)


def train_hierarchical(dataset: LabeledDataset, taxonomy: Taxonomy,
                       kernel: KernelSpec | None = None, config: SolverConfig | None = None,
                       use_beliefs: bool = True, epsilon: float = DEFAULT_EPSILON,
                       backend: str | None = None) -> HierarchicalModel:
    unknown = sorted(set(dataset.labels) - set(taxonomy.coarse_of))
    if unknown:
        raise DataError(f"label {unknown[0]!r} is not in the taxonomy")
    kernel = kernel or KernelSpec.for_dimension("rbf", dataset.dim)
    # beliefs are recomputed per level/branch because centroids depend on the label space
    base = LabeledDataset(dataset.vectors, dataset.labels)

    coarse = base.relabel(taxonomy.coarse_of)
    level1 = _fit(coarse, kernel, config, use_beliefs, epsilon, backend)

    coarse_arr = coarse.label_array
    level2 = {}
    for c in taxonomy.coarse_labels:
        idx = np.flatnonzero(coarse_arr == c)
        if idx.size == 0:
            raise DataError(f"coarse class {c!r} has no training samples")
        level2[c] = _fit(base.subset(idx), kernel, config, use_beliefs, epsilon, backend)
    return HierarchicalModel(level1, level2, taxonomy)


def predict_hierarchical_batch(model: HierarchicalModel, X):
    """Return ``(coarse, fine, level1_votes, fine_votes)``; fine votes are per-row dicts."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    coarse, votes1, _ = predict_ovo_batch(model.level1, X)
    coarse_arr = np.array(coarse, dtype=object)
    fine = [None] * X.shape[0]
    fine_votes = [None] * X.shape[0]
    for c in sorted(set(coarse)):
        idx = np.flatnonzero(coarse_arr == c)
        sub = model.level2[c]
        labels, votes, _ = predict_ovo_batch(sub, X[idx])
        for row, i in enumerate(idx):
            fine[i] = labels[row]
            fine_votes[i] = dict(zip(sub.labels, votes[row].tolist()))
    return coarse, fine, votes1, fine_votes


def predict_hierarchical(model: HierarchicalModel, x):
    coarse, fine, _, _ = predict_hierarchical_batch(model, np.asarray(x, dtype=np.float64).reshape(1, -1))
    return coarse[0], fine[0]
