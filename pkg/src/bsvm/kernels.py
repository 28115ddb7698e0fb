"""Linear and RBF kernels, and dense Gram matrices with optional belief scaling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist


@dataclass(frozen=True)
class KernelSpec:
    kind: str = "rbf"
    gamma: float = 1.0

    def __post_init__(self):
        if self.kind not in ("linear", "rbf"):
            raise ValueError(f"unknown kernel kind {self.kind!r}; expected 'linear' or 'rbf'")
        if self.kind == "rbf" and not (self.gamma > 0 and np.isfinite(self.gamma)):
            raise ValueError(f"rbf kernel needs gamma > 0, got {self.gamma}")

    @classmethod
    def for_dimension(cls, kind: str, dim: int, gamma: float | None = None) -> "KernelSpec":
        """Build a spec, defaulting gamma to 1/dim (1/117 for stacked phoneme vectors)."""
        if gamma is None:
            if dim < 1:
                raise ValueError("feature dimension must be positive")
            gamma = 1.0 / dim
        return cls(kind, float(gamma))


def _as_vector(x) -> np.ndarray:
    return np.asarray(x, dtype=np.float64).reshape(-1)


def _as_matrix(X) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.ndim != 2:
        raise ValueError(f"expected a 2-D sample matrix, got shape {X.shape}")
    return X


def kernel_eval(spec: KernelSpec, x, y) -> float:
    x, y = _as_vector(x), _as_vector(y)
    if x.shape[0] != y.shape[0]:
        raise ValueError(f"dimension mismatch: len(x)={x.shape[0]}, len(y)={y.shape[0]}")
    if spec.kind == "linear":
        return float(np.dot(x, y))
    diff = x - y
    return float(np.exp(-spec.gamma * np.dot(diff, diff)))


def cross_kernel(spec: KernelSpec, A, B) -> np.ndarray:
    """Kernel matrix K[i, j] = K(A[i], B[j])."""
    A, B = _as_matrix(A), _as_matrix(B)
    if A.shape[1] != B.shape[1]:
        raise ValueError(f"dimension mismatch: {A.shape[1]} vs {B.shape[1]}")
    if spec.kind == "linear":
        return A @ B.T
    # direct differences: identical points give exactly 0, so K == 1 iff x == y
    return np.exp(-spec.gamma * cdist(A, B, "sqeuclidean"))


def gram_matrix(spec: KernelSpec, X, beliefs=None) -> np.ndarray:
    """Dense Gram matrix of X; with beliefs m, entry (i, j) is m_i * m_j * K(x_i, x_j).

    The result is exactly symmetric. RBF diagonals are exactly 1 before scaling.
    """
    X = _as_matrix(X)
    n = X.shape[0]
    if n == 0:
        raise ValueError("cannot build a Gram matrix of an empty sample set")
    G = cross_kernel(spec, X, X)
    # mirror the upper triangle so symmetry does not depend on BLAS rounding
    iu = np.triu_indices(n, 1)
    G[(iu[1], iu[0])] = G[iu]
    if spec.kind == "rbf":
        np.fill_diagonal(G, 1.0)
    if beliefs is not None:
        m = check_beliefs(beliefs, n)
        G = G * np.outer(m, m)
    return G


def check_beliefs(beliefs, n: int) -> np.ndarray:
    m = np.asarray(beliefs, dtype=np.float64).reshape(-1)
    if m.shape[0] != n:
        raise ValueError(f"got {m.shape[0]} beliefs for {n} samples")
    bad = np.flatnonzero(~(m > 0) | ~np.isfinite(m))
    if bad.size:
        raise ValueError(f"beliefs must be finite and positive; sample {bad[0]} has {m[bad[0]]}")
    return m
