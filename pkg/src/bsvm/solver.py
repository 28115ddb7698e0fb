"""Binary soft-margin SVM trained in the dual, with optional per-sample beliefs.

With beliefs ``m`` the dual is

    max  sum(a) - 1/2 sum_ij m_i m_j a_i a_j y_i y_j K(x_i, x_j)
    s.t. 0 <= a_i <= C,  sum(a_i y_i) = 0

i.e. a standard dual over the scaled kernel ``m_i m_j K``. Passing no beliefs (or
all ones) gives the ordinary soft-margin SVM. The decision value of a query is
``sum_i a_i y_i m_i K(x_i, x) + b``; the query itself carries belief 1 because
its class, and so its centroid, is unknown.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field, replace

import numpy as np

from . import _smo_py
from .kernels import KernelSpec, check_beliefs, cross_kernel, gram_matrix

try:
    from . import _smo_ext
except ImportError:  # extension not built
    _smo_ext = None

log = logging.getLogger(__name__)

_BACKENDS = {"python": _smo_py.smo_solve}
if _smo_ext is not None:
    _BACKENDS["cython"] = _smo_ext.smo_solve


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


def _default_backend() -> str:
    wanted = os.environ.get("BSVM_BACKEND", "").strip().lower()
    if wanted:
        if wanted not in _BACKENDS:
            raise ImportError(f"BSVM_BACKEND={wanted!r} is not available; have {available_backends()}")
        return wanted
    return "cython" if "cython" in _BACKENDS else "python"


BACKEND = _default_backend()


@dataclass(frozen=True)
class SolverConfig:
    c: float = 10.0
    tolerance: float = 1e-3
    max_passes: int = 1000
    seed: int = 0

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError(f"C must be positive, got {self.c}")
        if not self.tolerance > 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")
        if self.max_passes < 1:
            raise ValueError(f"max_passes must be >= 1, got {self.max_passes}")


@dataclass(frozen=True, eq=False)
class BinaryModel:
    support_vectors: np.ndarray
    sv_labels: np.ndarray
    sv_alphas: np.ndarray
    sv_beliefs: np.ndarray
    bias: float
    kernel: KernelSpec
    c: float
    sv_indices: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    converged: bool = True
    kkt_gap: float = 0.0
    n_iter: int = 0
    objective: float = float("nan")

    @property
    def dim(self) -> int:
        return self.support_vectors.shape[1]

    @property
    def coef(self) -> np.ndarray:
        return self.sv_alphas * self.sv_labels * self.sv_beliefs


def _check_binary_data(X, y, beliefs):
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError(f"expected a 2-D sample matrix, got shape {X.shape}")
    n = X.shape[0]
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if y.shape[0] != n:
        raise ValueError(f"{y.shape[0]} labels for {n} samples")
    if not np.all((y == 1.0) | (y == -1.0)):
        raise ValueError("binary labels must be -1 or +1")
    m = None if beliefs is None else check_beliefs(beliefs, n)
    return X, y, m


def _solve(G, y, config, backend):
    n = y.shape[0]
    Q = G * np.outer(y, y)
    smo = _BACKENDS[backend or BACKEND]
    alpha, grad, n_iter, gap = smo(Q, y, float(config.c), float(config.tolerance),
                                   int(config.max_passes) * max(n, 1))
    objective = float(alpha.sum() - 0.5 * alpha @ (Q @ alpha))
    return alpha, grad, int(n_iter), max(float(gap), 0.0), objective


def _bias(alpha, y, f, c):
    """Bias of the weighted dual, where ``f_j = m_j * sum_i a_i y_i m_i K_ij``.

    Median of ``y_j - f_j`` over free support vectors; without any, the midpoint
    of the interval of b allowed by the bounded multipliers.
    """
    r = y - f
    free = (alpha > 0) & (alpha < c)
    if free.any():
        return float(np.median(r[free]))
    at_zero, at_c = alpha <= 0, alpha >= c
    lower_mask = (at_zero & (y > 0)) | (at_c & (y < 0))
    upper_mask = (at_zero & (y < 0)) | (at_c & (y > 0))
    lo = r[lower_mask].max() if lower_mask.any() else None
    hi = r[upper_mask].min() if upper_mask.any() else None
    if lo is None and hi is None:
        return 0.0
    if lo is None:
        return float(hi)
    if hi is None:
        return float(lo)
    return float(0.5 * (lo + hi))


def train_binary(X, y, beliefs=None, kernel: KernelSpec | None = None,
                 config: SolverConfig | None = None, backend: str | None = None) -> BinaryModel:
    """Train one belief-weighted binary SVM. ``beliefs=None`` means the standard SVM."""
    X, y, m = _check_binary_data(X, y, beliefs)
    kernel = kernel or KernelSpec.for_dimension("rbf", X.shape[1])
    config = config or SolverConfig()
    n = X.shape[0]
    if n < 2:
        raise ValueError("need at least 2 samples to train")
    if not ((y > 0).any() and (y < 0).any()):
        raise ValueError("training data contains a single class; both -1 and +1 are required")

    # seeded scan order decides ties in working-pair selection
    perm = np.random.default_rng(config.seed).permutation(n)
    Xp, yp = X[perm], y[perm]
    G = gram_matrix(kernel, Xp)
    mp = np.ones(n) if m is None else m[perm]
    Gw = G if m is None else G * np.outer(mp, mp)
    alpha_p, _, n_iter, gap, objective = _solve(Gw, yp, config, backend)

    # KKT-consistent bias: training points carry their own belief on the query side
    f = mp * (G @ (alpha_p * yp * mp))
    bias = _bias(alpha_p, yp, f, config.c)

    alpha = np.empty(n)
    alpha[perm] = alpha_p
    sv = np.flatnonzero(alpha > 0)
    converged = gap <= config.tolerance
    if not converged:
        log.warning("SMO stopped after %d iterations with KKT gap %.3g > tolerance %.3g",
                    n_iter, gap, config.tolerance)
    m_full = np.ones(n) if m is None else m
    return BinaryModel(
        support_vectors=X[sv].copy(),
        sv_labels=y[sv].copy(),
        sv_alphas=alpha[sv].copy(),
        sv_beliefs=m_full[sv].copy(),
        bias=bias,
        kernel=kernel,
        c=float(config.c),
        sv_indices=sv.astype(np.int64),
        converged=bool(converged),
        kkt_gap=gap,
        n_iter=n_iter,
        objective=objective,
    )


def decision_function(model: BinaryModel, X) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.shape[1] != model.dim:
        raise ValueError(f"dimension mismatch: model expects {model.dim} features, got {X.shape[1]}")
    if model.sv_alphas.size == 0:
        return np.full(X.shape[0], model.bias)
    return cross_kernel(model.kernel, X, model.support_vectors) @ model.coef + model.bias


def decision_value(model: BinaryModel, x) -> float:
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    return float(decision_function(model, x.reshape(1, -1))[0])


def predict_binary(model: BinaryModel, x) -> int:
    # exact zero goes to +1
    return 1 if decision_value(model, x) >= 0.0 else -1


def full_alphas(model: BinaryModel, n: int) -> np.ndarray:
    if model.sv_indices.size and model.sv_indices.max() >= n:
        raise ValueError(f"model references training index {model.sv_indices.max()} "
                         f"but only {n} samples were given")
    alpha = np.zeros(n)
    alpha[model.sv_indices] = model.sv_alphas
    return alpha


def dual_objective(alpha, y, G) -> float:
    """Weighted dual value ``sum(a) - 1/2 a'Qa`` for a (possibly weighted) Gram ``G``."""
    alpha = np.asarray(alpha, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    v = alpha * y
    return float(alpha.sum() - 0.5 * v @ (G @ v))


def kkt_violation(model: BinaryModel, X, y, beliefs=None) -> float:
    """Largest maximal-violating-pair gap of the weighted dual at the model's multipliers.

    Zero means the multipliers are exactly optimal. The gap is the usual SMO
    stopping quantity ``max_{I_up} -y_i g_i - min_{I_low} -y_j g_j``.
    """
    X, y, m = _check_binary_data(X, y, beliefs)
    n = X.shape[0]
    alpha = full_alphas(model, n)
    G = gram_matrix(model.kernel, X, m)
    grad = y * (G @ (alpha * y)) - 1.0
    score = -y * grad
    c = model.c
    up = np.where(y > 0, alpha < c, alpha > 0)
    low = np.where(y > 0, alpha > 0, alpha < c)
    if not up.any() or not low.any():
        return 0.0
    return max(0.0, float(score[up].max() - score[low].min()))


def with_alphas(model: BinaryModel, alphas) -> BinaryModel:
    """Copy of ``model`` with its stored multipliers replaced (diagnostics and tests)."""
    return replace(model, sv_alphas=np.asarray(alphas, dtype=np.float64))
