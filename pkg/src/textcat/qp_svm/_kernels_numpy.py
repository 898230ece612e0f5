"""Pure-numpy working-set loop for the box-constrained dual.

Kept in lockstep with _kernels_numba: same pivot selection, same
clipping arithmetic, same update order, so the two backends walk the
same pair sequence up to floating-point ties.
"""

from __future__ import annotations

import numpy as np


def solve_smo(data, indices, indptr, y, diag, dim, C, tol, max_iter):
    """Maximal-violating-pair updates until the dual gap closes.

    Returns (alpha, grad, iterations, converged, gap) where grad is the
    gradient of the minimization form, initialized at -1 for alpha = 0.
    """
    n = y.size
    alpha = np.zeros(n)
    grad = -np.ones(n)
    scratch = np.zeros(dim)
    lengths = np.diff(indptr)
    empty_rows = lengths == 0
    starts = np.minimum(indptr[:-1], max(data.size - 1, 0))
    pos = y > 0.0

    iterations = 0
    converged = False
    gap = np.inf
    while True:
        neg_yg = -(y * grad)
        up = (pos & (alpha < C)) | (~pos & (alpha > 0.0))
        low = (~pos & (alpha < C)) | (pos & (alpha > 0.0))
        if not up.any() or not low.any():
            gap = -np.inf
            converged = True
            break
        i = int(np.argmax(np.where(up, neg_yg, -np.inf)))
        j = int(np.argmin(np.where(low, neg_yg, np.inf)))
        m = float(neg_yg[i])
        big_m = float(neg_yg[j])
        gap = m - big_m
        if gap <= tol:
            converged = True
            break
        if iterations >= max_iter:
            break

        si, ei = indptr[i], indptr[i + 1]
        sj, ej = indptr[j], indptr[j + 1]
        cols_i, vals_i = indices[si:ei], data[si:ei]
        cols_j, vals_j = indices[sj:ej], data[sj:ej]
        _, ia, ib = np.intersect1d(cols_i, cols_j, assume_unique=True, return_indices=True)
        kij = float(vals_i[ia] @ vals_j[ib]) if ia.size else 0.0
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
        # Snap to the box exactly when the step lands on a bound.
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
        scratch[cols_i] += coef_i * vals_i
        scratch[cols_j] += coef_j * vals_j
        row_dots = np.add.reduceat(data * scratch[indices], starts)
        row_dots[empty_rows] = 0.0
        grad += y * row_dots
        scratch[cols_i] = 0.0
        scratch[cols_j] = 0.0
        iterations += 1

    return alpha, grad, iterations, converged, gap
