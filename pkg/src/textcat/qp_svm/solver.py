"""Soft-margin linear classifier via the box-constrained dual.

The solver maximizes

    W(a) = sum(a) - 1/2 * sum_ij a_i a_j y_i y_j (x_i . x_j)

subject to 0 <= a_i <= C and sum(y_i a_i) = 0, picking the maximal
violating pair each iteration. Everything here is linear-kernel only,
so the normal vector is recovered exactly as w = sum(y_i a_i x_i).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import DegenerateModelError, DimensionMismatch
from ..vectorizer import SparseVector
from .kernels import resolve_backend


class TrainingSet:
    """Labeled vectors in CSR form, labels strictly +1/-1, both present."""

    def __init__(self, vectors: Sequence[SparseVector], labels: Sequence[int]):
        vectors = list(vectors)
        labels = list(labels)
        if len(vectors) != len(labels):
            raise DimensionMismatch("vectors and labels differ in length")
        if len(vectors) < 2:
            raise DegenerateModelError("training needs at least two documents")
        if any(label not in (1, -1) for label in labels):
            raise DegenerateModelError("labels must be +1 or -1")
        if len(set(labels)) < 2:
            raise DegenerateModelError("training needs both classes present")
        dim = vectors[0].dim
        if any(v.dim != dim for v in vectors):
            raise DimensionMismatch("all vectors must share one dimension")

        self.n = len(vectors)
        self.dim = dim
        self.y = np.asarray(labels, dtype=np.float64)
        self.y.setflags(write=False)
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        for t, vec in enumerate(vectors):
            indptr[t + 1] = indptr[t] + vec.nnz
        self.indptr = indptr
        self.indices = (
            np.concatenate([v.indices for v in vectors])
            if indptr[-1]
            else np.empty(0, dtype=np.int64)
        )
        self.data = (
            np.concatenate([v.values for v in vectors]) if indptr[-1] else np.empty(0)
        )
        for arr in (self.indptr, self.indices, self.data):
            arr.setflags(write=False)
        self.diag = np.array([float(v.values @ v.values) for v in vectors])
        self.diag.setflags(write=False)

    @property
    def nnz(self) -> int:
        return int(self.indptr[-1])

    def row_dots(self, dense: np.ndarray) -> np.ndarray:
        """Per-document dot products against one dense vector."""
        if dense.shape != (self.dim,):
            raise DimensionMismatch(f"expected shape ({self.dim},), got {dense.shape}")
        if self.nnz == 0:
            return np.zeros(self.n)
        lengths = np.diff(self.indptr)
        starts = np.minimum(self.indptr[:-1], self.data.size - 1)
        dots = np.add.reduceat(self.data * dense[self.indices], starts)
        dots[lengths == 0] = 0.0
        return dots

    def weighted_row_sum(self, coef: np.ndarray) -> np.ndarray:
        """sum_t coef_t * x_t as a dense vector."""
        if coef.shape != (self.n,):
            raise DimensionMismatch(f"expected shape ({self.n},), got {coef.shape}")
        out = np.zeros(self.dim)
        if self.nnz:
            per_entry = np.repeat(coef, np.diff(self.indptr))
            np.add.at(out, self.indices, per_entry * self.data)
        return out


@dataclass(frozen=True)
class DualSolution:
    """Solver output: multipliers plus convergence diagnostics."""

    alpha: np.ndarray
    objective: float
    converged: bool
    iterations: int
    gap: float
    backend: str

    def __post_init__(self) -> None:
        self.alpha.setflags(write=False)


@dataclass(frozen=True)
class Hyperplane:
    """Separating plane w . x + b = 0 with its geometric margin."""

    w: np.ndarray
    b: float
    margin: float
    support: np.ndarray  # training rows with alpha > 0
    n_bounded: int  # support rows stuck at alpha = C

    def __post_init__(self) -> None:
        self.w.setflags(write=False)
        self.support.setflags(write=False)

    def decision_value(self, vec: SparseVector) -> float:
        return vec.dot_dense(self.w) + self.b


def solve_dual(
    ts: TrainingSet,
    C: float,
    tol: float = 1e-3,
    max_iter: int | None = None,
    backend: str | None = None,
) -> DualSolution:
    """Run the working-set loop on one training set."""
    if not C > 0.0:
        raise DegenerateModelError(f"C must be positive, got {C}")
    if not tol > 0.0:
        raise DegenerateModelError(f"tol must be positive, got {tol}")
    if ts.nnz == 0:
        raise DegenerateModelError("every training vector is zero")
    if max_iter is None:
        max_iter = max(10_000, 100 * ts.n)
    name, kernel = resolve_backend(backend)
    alpha, _, iterations, converged, gap = kernel(
        ts.data,
        ts.indices,
        ts.indptr,
        ts.y,
        ts.diag,
        ts.dim,
        float(C),
        float(tol),
        int(max_iter),
    )
    w = ts.weighted_row_sum(ts.y * alpha)
    objective = float(alpha.sum() - 0.5 * (w @ w))
    return DualSolution(
        alpha=alpha,
        objective=objective,
        converged=bool(converged),
        iterations=int(iterations),
        gap=float(gap),
        backend=name,
    )


def extract_hyperplane(ts: TrainingSet, solution: DualSolution, C: float) -> Hyperplane:
    """Recover (w, b, margin) from the multipliers.

    The offset is averaged over unbounded support vectors; when every
    support vector sits at the box bound, it falls back to the midpoint
    between the innermost decision values of the two classes.
    """
    alpha = solution.alpha
    support = np.flatnonzero(alpha > 0.0)
    if support.size == 0:
        raise DegenerateModelError("no support vectors: all multipliers are zero")
    w = ts.weighted_row_sum(ts.y * alpha)
    norm = float(np.linalg.norm(w))
    if norm <= 0.0:
        raise DegenerateModelError("degenerate plane: w vanished")

    eps = 1e-9 * C
    unbounded = (alpha > eps) & (alpha < C - eps)
    dots = ts.row_dots(w)
    if unbounded.any():
        b = float(np.mean(ts.y[unbounded] - dots[unbounded]))
    else:
        # Every support vector sits at the bound, so the offset is only
        # pinned to a window. v_t = y_t - w . x_t bounds b from below over
        # rows free to grow and from above over rows free to shrink;
        # the midpoint spreads the residual violation evenly.
        v = ts.y - dots
        pos = ts.y > 0.0
        up = (pos & (alpha < C)) | (~pos & (alpha > 0.0))
        low = (~pos & (alpha < C)) | (pos & (alpha > 0.0))
        lo = float(v[up].max()) if up.any() else None
        hi = float(v[low].min()) if low.any() else None
        if lo is None and hi is None:
            raise DegenerateModelError("offset window is empty")
        if lo is None:
            b = hi
        elif hi is None:
            b = lo
        else:
            b = (lo + hi) / 2.0
    n_bounded = int(np.count_nonzero(alpha >= C - eps))
    return Hyperplane(w=w, b=b, margin=1.0 / norm, support=support, n_bounded=n_bounded)


def compute_slacks(ts: TrainingSet, plane: Hyperplane) -> np.ndarray:
    """Per-document hinge slack max(0, 1 - y (w . x + b))."""
    return np.maximum(0.0, 1.0 - ts.y * (ts.row_dots(plane.w) + plane.b))


@dataclass(frozen=True)
class KktReport:
    """Worst-case optimality violations, all zero at the exact optimum."""

    outside_violation: float  # alpha = 0 rows must have y f >= 1
    interior_violation: float  # 0 < alpha < C rows must have y f = 1
    bound_violation: float  # alpha = C rows must have y f <= 1
    box_violation: float  # alpha outside [0, C]
    equality_residual: float  # |sum(y alpha)|

    def max_violation(self) -> float:
        return max(
            self.outside_violation,
            self.interior_violation,
            self.bound_violation,
            self.box_violation,
            self.equality_residual,
        )

    def satisfied(self, tol: float) -> bool:
        return self.max_violation() <= tol


def kkt_report(
    ts: TrainingSet,
    solution: DualSolution,
    plane: Hyperplane,
    C: float,
) -> KktReport:
    alpha = solution.alpha
    yf = ts.y * (ts.row_dots(plane.w) + plane.b)
    eps = 1e-9 * C
    outside = alpha <= eps
    bounded = alpha >= C - eps
    interior = ~outside & ~bounded

    def worst(mask: np.ndarray, values: np.ndarray) -> float:
        return float(values[mask].max()) if mask.any() else 0.0

    return KktReport(
        outside_violation=worst(outside, np.maximum(0.0, 1.0 - yf)),
        interior_violation=worst(interior, np.abs(yf - 1.0)),
        bound_violation=worst(bounded, np.maximum(0.0, yf - 1.0)),
        box_violation=float(np.maximum(np.maximum(-alpha, alpha - C), 0.0).max()),
        equality_residual=float(abs(ts.y @ alpha)),
    )
