"""One-against-one ensemble of binary (belief-weighted) SVMs with majority voting."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .belief import DEFAULT_EPSILON, assign_beliefs
from .data.dataset import LabeledDataset
from .kernels import KernelSpec
from .solver import BinaryModel, SolverConfig, decision_function, train_binary

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class OvoModel:
    labels: tuple
    pairs: tuple  # (label_a, label_b, BinaryModel); label_a -> +1, label_b -> -1
    kernel: KernelSpec
    use_beliefs: bool = True

    @property
    def dim(self) -> int:
        return self.pairs[0][2].dim

    @property
    def nonconverged(self) -> list:
        return [(a, b) for a, b, m in self.pairs if not m.converged]


@dataclass(frozen=True)
class ConstantModel:
    """Stand-in for a classifier over a single label."""

    label: object
    dim: int

    @property
    def labels(self) -> tuple:
        return (self.label,)

    @property
    def pairs(self) -> tuple:
        return ()

    @property
    def nonconverged(self) -> list:
        return []


def train_ovo(dataset: LabeledDataset, kernel: KernelSpec | None = None,
              config: SolverConfig | None = None, use_beliefs: bool = True,
              epsilon: float = DEFAULT_EPSILON, backend: str | None = None) -> OvoModel:
    labels = dataset.classes
    if len(labels) < 2:
        raise ValueError(f"one-vs-one training needs at least 2 classes, got {list(labels)}")
    kernel = kernel or KernelSpec.for_dimension("rbf", dataset.dim)
    config = config or SolverConfig()

    if use_beliefs:
        beliefs = dataset.beliefs
        if beliefs is None:
            beliefs = assign_beliefs(dataset.vectors, dataset.labels, epsilon).normalized
    else:
        beliefs = None

    y_all = dataset.label_array
    pairs = []
    for a, b in combinations(labels, 2):
        idx = np.flatnonzero((y_all == a) | (y_all == b))
        y = np.where(y_all[idx] == a, 1.0, -1.0)
        m = None if beliefs is None else beliefs[idx]
        model = train_binary(dataset.vectors[idx], y, m, kernel, config, backend)
        log.info("pair %s/%s: %d SVs, %d iterations, KKT gap %.2e%s", a, b,
                 model.sv_alphas.size, model.n_iter, model.kkt_gap,
                 "" if model.converged else " (not converged)")
        pairs.append((a, b, model))
    return OvoModel(tuple(labels), tuple(pairs), kernel, bool(use_beliefs))


def ovo_scores(model: OvoModel, X):
    """Vote counts and aggregate |decision value| of winning votes, both (n, k)."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    k = len(model.labels)
    pos = {label: i for i, label in enumerate(model.labels)}
    votes = np.zeros((X.shape[0], k), dtype=np.int64)
    margins = np.zeros((X.shape[0], k))
    for a, b, binary in model.pairs:
        dv = decision_function(binary, X)
        winner = np.where(dv >= 0.0, pos[a], pos[b])
        rows = np.arange(X.shape[0])
        votes[rows, winner] += 1
        margins[rows, winner] += np.abs(dv)
    return votes, margins


def _pick(votes, margins) -> np.ndarray:
    # most votes, then largest margin sum, then earliest label
    best = votes.max(axis=1, keepdims=True)
    m = np.where(votes == best, margins, -np.inf)
    return np.argmax(m, axis=1)


def predict_ovo_batch(model, X):
    """Predicted labels plus the vote and margin tables (columns follow ``model.labels``)."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if isinstance(model, ConstantModel):
        if X.shape[1] != model.dim:
            raise ValueError(f"dimension mismatch: model expects {model.dim} features, got {X.shape[1]}")
        n = X.shape[0]
        return [model.label] * n, np.zeros((n, 1), dtype=np.int64), np.zeros((n, 1))
    votes, margins = ovo_scores(model, X)
    winners = _pick(votes, margins)
    return [model.labels[w] for w in winners], votes, margins


def predict_ovo(model, x):
    """Return ``(label, votes, margins)`` for one vector; votes/margins are dicts by label."""
    x = np.asarray(x, dtype=np.float64).reshape(1, -1)
    labels, votes, margins = predict_ovo_batch(model, x)
    return (labels[0],
            dict(zip(model.labels, votes[0].tolist())),
            dict(zip(model.labels, margins[0].tolist())))
