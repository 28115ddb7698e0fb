"""Pure numpy SMO loop; mirrors ``_smo_ext.pyx`` operation for operation."""

import numpy as np

TAU = 1e-12


def smo_solve(Q, y, c, tol, max_iter):
    """Minimise 0.5 a'Qa - sum(a) s.t. y'a = 0, 0 <= a <= c.

    ``Q[i, j] = y_i y_j K'(i, j)`` and must be exactly symmetric. The working
    pair is the maximal violating pair. Returns ``(alpha, grad, n_iter, gap)`` where ``gap`` is the final
    max-violating-pair gap (<= tol on convergence).
    """
    Q = np.ascontiguousarray(Q, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    n = y.shape[0]
    alpha = np.zeros(n)
    grad = -np.ones(n)
    pos = y > 0
    it = 0
    gap = np.inf
    while True:
        score = -y * grad
        up = np.where(pos, alpha < c, alpha > 0)
        low = np.where(pos, alpha > 0, alpha < c)
        if not up.any() or not low.any():
            gap = 0.0
            break
        i = int(np.argmax(np.where(up, score, -np.inf)))
        j = int(np.argmin(np.where(low, score, np.inf)))
        gap = float(score[i] - score[j])
        if gap <= tol or it >= max_iter:
            break
        # a_i += y_i*lam, a_j -= y_j*lam
        eta = Q[i, i] + Q[j, j] - 2.0 * y[i] * y[j] * Q[i, j]
        if eta <= 0.0:
            eta = TAU
        lam = gap / eta
        room_i = c - alpha[i] if y[i] > 0 else alpha[i]
        room_j = alpha[j] if y[j] > 0 else c - alpha[j]
        hit_i = room_i <= lam
        hit_j = room_j <= lam
        if hit_i or hit_j:
            lam = min(room_i, room_j)
        old_i, old_j = alpha[i], alpha[j]
        alpha[i] = old_i + y[i] * lam
        alpha[j] = old_j - y[j] * lam
        if hit_i and room_i <= room_j:
            alpha[i] = c if y[i] > 0 else 0.0
        if hit_j and room_j <= room_i:
            alpha[j] = 0.0 if y[j] > 0 else c
        d_i = alpha[i] - old_i
        d_j = alpha[j] - old_j
        grad += Q[i] * d_i + Q[j] * d_j
        it += 1
    return alpha, grad, it, gap
