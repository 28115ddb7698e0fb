# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled SMO loop. Same algorithm and floating-point operation order as _smo_py."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef double TAU = 1e-12
cdef double INF = float("inf")


def smo_solve(Q, y, double c, double tol, long max_iter):
    cdef double[:, ::1] q = np.ascontiguousarray(Q, dtype=np.float64)
    cdef double[::1] yy = np.ascontiguousarray(y, dtype=np.float64)
    cdef Py_ssize_t n = yy.shape[0]
    alpha_arr = np.zeros(n)
    grad_arr = -np.ones(n)
    cdef double[::1] alpha = alpha_arr
    cdef double[::1] grad = grad_arr
    cdef Py_ssize_t i, j, k
    cdef long it = 0
    cdef double gap = INF
    cdef double best_up, best_low, s, eta, lam, room_i, room_j, old_i, old_j, d_i, d_j
    cdef bint in_up, in_low, hit_i, hit_j

    while True:
        i = -1
        j = -1
        best_up = -INF
        best_low = INF
        for k in range(n):
            s = -yy[k] * grad[k]
            if yy[k] > 0:
                in_up = alpha[k] < c
                in_low = alpha[k] > 0
            else:
                in_up = alpha[k] > 0
                in_low = alpha[k] < c
            if in_up and (i < 0 or s > best_up):
                best_up = s
                i = k
            if in_low and (j < 0 or s < best_low):
                best_low = s
                j = k
        if i < 0 or j < 0:
            gap = 0.0
            break
        gap = best_up - best_low
        if gap <= tol or it >= max_iter:
            break
        eta = q[i, i] + q[j, j] - 2.0 * yy[i] * yy[j] * q[i, j]
        if eta <= 0.0:
            eta = TAU
        lam = gap / eta
        room_i = c - alpha[i] if yy[i] > 0 else alpha[i]
        room_j = alpha[j] if yy[j] > 0 else c - alpha[j]
        hit_i = room_i <= lam
        hit_j = room_j <= lam
        if hit_i or hit_j:
            lam = room_i if room_i < room_j else room_j
        old_i = alpha[i]
        old_j = alpha[j]
        alpha[i] = old_i + yy[i] * lam
        alpha[j] = old_j - yy[j] * lam
        if hit_i and room_i <= room_j:
            alpha[i] = c if yy[i] > 0 else 0.0
        if hit_j and room_j <= room_i:
            alpha[j] = 0.0 if yy[j] > 0 else c
        d_i = alpha[i] - old_i
        d_j = alpha[j] - old_j
        for k in range(n):
            grad[k] += q[i, k] * d_i + q[j, k] * d_j
        it += 1
    return alpha_arr, grad_arr, it, gap
