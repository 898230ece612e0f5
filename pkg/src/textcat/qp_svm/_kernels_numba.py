"""Jit-compiled working-set loop; importing this module requires numba.

The arithmetic mirrors _kernels_numpy operation for operation. Row
dot products accumulate left to right exactly like the reduceat order
in the numpy path, so results differ only through pivot ties.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _row_dot(data, indices, indptr, i, j):
    a, a_end = indptr[i], indptr[i + 1]
    b, b_end = indptr[j], indptr[j + 1]
    total = 0.0
    while a < a_end and b < b_end:
        ca, cb = indices[a], indices[b]
        if ca == cb:
            total += data[a] * data[b]
            a += 1
            b += 1
        elif ca < cb:
            a += 1
        else:
            b += 1
    return total


@njit(cache=True)
def solve_smo(data, indices, indptr, y, diag, dim, C, tol, max_iter):
    n = y.size
    alpha = np.zeros(n)
    grad = -np.ones(n)
    scratch = np.zeros(dim)

    iterations = 0
    converged = False
    gap = np.inf
    while True:
        m = -np.inf
        i = -1
        big_m = np.inf
        j = -1
        for t in range(n):
            v = -y[t] * grad[t]
            if (y[t] > 0.0 and alpha[t] < C) or (y[t] < 0.0 and alpha[t] > 0.0):
                if v > m:
                    m = v
                    i = t
            if (y[t] < 0.0 and alpha[t] < C) or (y[t] > 0.0 and alpha[t] > 0.0):
                if v < big_m:
                    big_m = v
                    j = t
        if i < 0 or j < 0:
            gap = -np.inf
            converged = True
            break
        gap = m - big_m
        if gap <= tol:
            converged = True
            break
        if iterations >= max_iter:
            break

        kij = _row_dot(data, indices, indptr, i, j)
        quad = diag[i] + diag[j] - 2.0 * kij
        if quad < 1e-12:
            quad = 1e-12

        step = gap / quad
        dmax_i = (C - alpha[i]) if y[i] > 0.0 else alpha[i]
        dmax_j = alpha[j] if y[j] > 0.0 else (C - alpha[j])
        if dmax_i < step:
            step = dmax_i
        if dmax_j < step:
            step = dmax_j
        new_ai = alpha[i] + y[i] * step
        if step >= dmax_i:
            new_ai = C if y[i] > 0.0 else 0.0
        new_aj = alpha[j] - y[j] * step
        if step >= dmax_j:
            new_aj = 0.0 if y[j] > 0.0 else C
        delta_i = new_ai - alpha[i]
        delta_j = new_aj - alpha[j]
        alpha[i] = new_ai
        alpha[j] = new_aj

        coef_i = y[i] * delta_i
        coef_j = y[j] * delta_j
        for k in range(indptr[i], indptr[i + 1]):
            scratch[indices[k]] += coef_i * data[k]
        for k in range(indptr[j], indptr[j + 1]):
            scratch[indices[k]] += coef_j * data[k]
        for t in range(n):
            total = 0.0
            for k in range(indptr[t], indptr[t + 1]):
                total += data[k] * scratch[indices[k]]
            grad[t] += y[t] * total
        for k in range(indptr[i], indptr[i + 1]):
            scratch[indices[k]] = 0.0
        for k in range(indptr[j], indptr[j + 1]):
            scratch[indices[k]] = 0.0
        iterations += 1

    return alpha, grad, iterations, converged, gap
