"""Dual solver: frozen analytic cases, oracle agreement, optimality."""

import numpy as np
import pytest

from qp_oracle import pgd_reference, random_instance
from textcat.errors import ConfigError, DegenerateModelError, DimensionMismatch
from textcat.qp_svm import (
    HAS_NUMBA,
    TrainingSet,
    compute_slacks,
    extract_hyperplane,
    kkt_report,
    resolve_backend,
    solve_dual,
)
from textcat.vectorizer import SparseVector

BACKENDS = ("numpy", "numba") if HAS_NUMBA else ("numpy",)


def sparse_rows(X):
    X = np.asarray(X, dtype=np.float64)
    rows = []
    for row in X:
        idx = np.flatnonzero(row != 0.0).astype(np.int64)
        rows.append(SparseVector(X.shape[1], idx, row[idx]))
    return rows


def training_set(X, y):
    return TrainingSet(sparse_rows(X), [int(v) for v in y])


TWO_POINT = training_set([[1.0, 0.0], [-1.0, 0.0]], [1, -1])


@pytest.mark.parametrize("backend", BACKENDS)
def test_two_point_analytic_solution(backend):
    # Optimum computed by hand: W(t) = 2t - 2t^2 peaks at t = 1/2.
    sol = solve_dual(TWO_POINT, C=1.0, tol=1e-6, backend=backend)
    assert sol.converged
    assert np.allclose(sol.alpha, [0.5, 0.5], atol=1e-9)
    assert abs(sol.objective - 0.5) < 1e-9
    plane = extract_hyperplane(TWO_POINT, sol, C=1.0)
    assert np.allclose(plane.w, [1.0, 0.0], atol=1e-9)
    assert abs(plane.b) < 1e-9
    assert abs(plane.margin - 1.0) < 1e-9
    assert plane.support.tolist() == [0, 1]
    assert plane.n_bounded == 0


@pytest.mark.parametrize("backend", BACKENDS)
def test_two_point_box_bound(backend):
    # With C = 0.1 both multipliers cap out: W(0.1) = 0.2 - 0.02 = 0.18.
    sol = solve_dual(TWO_POINT, C=0.1, tol=1e-6, backend=backend)
    assert np.allclose(sol.alpha, [0.1, 0.1], atol=0)
    assert abs(sol.objective - 0.18) < 1e-12
    plane = extract_hyperplane(TWO_POINT, sol, C=0.1)
    assert plane.n_bounded == 2
    assert abs(plane.b) < 1e-9


def test_translated_pair_shifts_offset():
    ts = training_set([[1.5, 0.0], [-0.5, 0.0]], [1, -1])
    sol = solve_dual(ts, C=1.0, tol=1e-8)
    plane = extract_hyperplane(ts, sol, C=1.0)
    assert np.allclose(plane.w, [1.0, 0.0], atol=1e-8)
    assert abs(plane.b - (-0.5)) < 1e-8
    assert abs(plane.margin - 1.0) < 1e-8


@pytest.mark.parametrize("backend", BACKENDS)
def test_objective_matches_reference_solver(backend):
    rng = np.random.default_rng(2024)
    trials = 30 if backend == "numpy" else 10
    for _ in range(trials):
        X, y, C = random_instance(rng)
        ts = training_set(X, y)
        sol = solve_dual(ts, C=C, tol=1e-6, backend=backend)
        assert sol.converged
        _, ref_obj = pgd_reference(X, y, C)
        scale = max(1.0, abs(ref_obj))
        assert abs(sol.objective - ref_obj) <= 1e-4 * scale
        assert abs(float(ts.y @ sol.alpha)) <= 1e-8
        assert np.all(sol.alpha >= 0.0) and np.all(sol.alpha <= C)


def test_kkt_conditions_hold_after_convergence():
    rng = np.random.default_rng(7)
    checked = 0
    for _ in range(25):
        X, y, C = random_instance(rng)
        ts = training_set(X, y)
        sol = solve_dual(ts, C=C, tol=1e-6)
        try:
            plane = extract_hyperplane(ts, sol, C=C)
        except DegenerateModelError:
            continue  # w can vanish when duplicates carry both labels
        report = kkt_report(ts, sol, plane, C=C)
        assert report.satisfied(1e-3), report
        checked += 1
    assert checked >= 15


def test_slacks_match_direct_formula():
    rng = np.random.default_rng(12)
    X, y, C = random_instance(rng)
    ts = training_set(X, y)
    sol = solve_dual(ts, C=C, tol=1e-6)
    try:
        plane = extract_hyperplane(ts, sol, C=C)
    except DegenerateModelError:
        pytest.skip("degenerate draw")
    slacks = compute_slacks(ts, plane)
    for t in range(ts.n):
        f = float(X[t] @ plane.w + plane.b)
        assert abs(slacks[t] - max(0.0, 1.0 - y[t] * f)) < 1e-12
    assert np.all(slacks >= 0.0)


@pytest.mark.skipif(not HAS_NUMBA, reason="numba unavailable")
def test_backends_agree():
    rng = np.random.default_rng(99)
    for _ in range(10):
        X, y, C = random_instance(rng)
        ts = training_set(X, y)
        a = solve_dual(ts, C=C, tol=1e-8, backend="numpy")
        b = solve_dual(ts, C=C, tol=1e-8, backend="numba")
        assert abs(a.objective - b.objective) <= 1e-8 * max(1.0, abs(a.objective))


def test_backend_selection(monkeypatch):
    monkeypatch.setenv("TEXTCAT_NUMBA", "0")
    assert resolve_backend()[0] == "numpy"
    monkeypatch.setenv("TEXTCAT_NUMBA", "auto")
    assert resolve_backend()[0] == ("numba" if HAS_NUMBA else "numpy")
    monkeypatch.delenv("TEXTCAT_NUMBA")
    assert resolve_backend("numpy")[0] == "numpy"
    with pytest.raises(ConfigError):
        resolve_backend("quantum")


def test_training_set_validation():
    rows = sparse_rows([[1.0], [-1.0]])
    with pytest.raises(DegenerateModelError):
        TrainingSet(rows, [1, 1])  # one class
    with pytest.raises(DegenerateModelError):
        TrainingSet(rows[:1], [1])  # too small
    with pytest.raises(DegenerateModelError):
        TrainingSet(rows, [1, 0])  # bad label
    with pytest.raises(DimensionMismatch):
        TrainingSet([rows[0], sparse_rows([[1.0, 2.0]])[0]], [1, -1])
    with pytest.raises(DegenerateModelError):
        solve_dual(TWO_POINT, C=0.0)


def test_all_zero_vectors_rejected():
    ts = TrainingSet(sparse_rows([[0.0], [0.0]]), [1, -1])
    with pytest.raises(DegenerateModelError):
        solve_dual(ts, C=1.0)


def test_iteration_cap_reports_nonconvergence():
    rng = np.random.default_rng(5)
    X = rng.normal(size=(20, 2))
    y = np.where(rng.random(20) < 0.5, 1, -1)
    y[0], y[1] = 1, -1
    ts = training_set(X, y)
    sol = solve_dual(ts, C=10.0, tol=1e-10, max_iter=2)
    assert not sol.converged
    assert sol.iterations == 2
    assert sol.gap > 1e-10


def test_row_helpers_match_dense_algebra():
    rng = np.random.default_rng(3)
    X = rng.normal(size=(6, 4))
    X[2] = 0.0  # a zero row must produce zero dots, not garbage
    y = np.array([1, -1, 1, -1, 1, -1])
    ts = training_set(X, y)
    dense = rng.normal(size=4)
    assert np.allclose(ts.row_dots(dense), X @ dense, atol=1e-12)
    coef = rng.normal(size=6)
    assert np.allclose(ts.weighted_row_sum(coef), X.T @ coef, atol=1e-12)
