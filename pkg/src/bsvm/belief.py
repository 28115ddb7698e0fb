"""Per-sample confidence degrees from the distance to the own-class centroid.

A sample's raw belief is ``1 / (d + eps)`` where ``d`` is its Euclidean distance to
the mean of its class. Raw beliefs are divided by the largest raw belief within the
class, so every class has at least one sample at exactly 1 and the rest in (0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_EPSILON = 1e-9


@dataclass(frozen=True)
class BeliefAssignment:
    centroids: dict
    raw: np.ndarray
    normalized: np.ndarray
    epsilon: float


def class_centroid(samples) -> np.ndarray:
    S = np.asarray(samples, dtype=np.float64)
    if S.ndim == 1:
        S = S.reshape(1, -1)
    if S.shape[0] == 0:
        raise ValueError("cannot take the centroid of an empty sample set")
    return S.mean(axis=0)


def euclidean_distance(a, b) -> float:
    a = np.asarray(a, dtype=np.float64).reshape(-1)
    b = np.asarray(b, dtype=np.float64).reshape(-1)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    return float(np.sqrt(np.dot(a - b, a - b)))


def assign_beliefs(vectors, labels, epsilon: float = DEFAULT_EPSILON) -> BeliefAssignment:
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    X = np.asarray(vectors, dtype=np.float64)
    labels = np.asarray(labels, dtype=object)
    if X.ndim != 2 or X.shape[0] != labels.shape[0]:
        raise ValueError(f"{labels.shape[0]} labels for sample matrix of shape {X.shape}")
    if X.shape[0] == 0:
        raise ValueError("cannot assign beliefs on an empty dataset")

    raw = np.empty(X.shape[0])
    normalized = np.empty(X.shape[0])
    centroids = {}
    for label in sorted(set(labels.tolist())):
        idx = np.flatnonzero(labels == label)
        center = class_centroid(X[idx])
        centroids[label] = center
        diff = X[idx] - center
        dist = np.sqrt(np.einsum("ij,ij->i", diff, diff))
        r = 1.0 / (dist + epsilon)
        raw[idx] = r
        normalized[idx] = r / r.max()
    return BeliefAssignment(centroids, raw, normalized, float(epsilon))
