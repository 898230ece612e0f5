"""Time the dual solver's numba kernels against the numpy fallback.

Builds random sparse training sets shaped like tfidf output (unit rows,
nonnegative entries, balanced labels) and reports wall time per backend.
The first numba solve pays JIT compilation, so each backend gets an
untimed warmup solve before measurement.
"""

import argparse
import time

import numpy as np

from textcat.qp_svm import HAS_NUMBA, TrainingSet, solve_dual
from textcat.vectorizer import SparseVector


def random_training_set(n_rows, dim, nnz, rng):
    rows = []
    labels = []
    for t in range(n_rows):
        idx = np.sort(rng.choice(dim, size=nnz, replace=False)).astype(np.int64)
        vals = rng.random(nnz) + 0.1
        vals /= np.linalg.norm(vals)
        # Two loose clusters so the problem is learnable but not separable.
        label = 1 if t % 2 == 0 else -1
        vals[0] += 0.5 if label == 1 else 0.0
        vals /= np.linalg.norm(vals)
        rows.append(SparseVector(dim, idx, vals))
        labels.append(label)
    return TrainingSet(rows, labels)


def time_backend(ts, C, tol, backend, repeats):
    solve_dual(ts, C=C, tol=tol, backend=backend)  # warmup, discards JIT cost
    best = float("inf")
    iterations = 0
    for _ in range(repeats):
        t0 = time.perf_counter()
        sol = solve_dual(ts, C=C, tol=tol, backend=backend)
        best = min(best, time.perf_counter() - t0)
        iterations = sol.iterations
    return best, iterations


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="200,800,2000",
                        help="comma-separated row counts")
    parser.add_argument("--dim", type=int, default=5000)
    parser.add_argument("--nnz", type=int, default=40,
                        help="nonzeros per row")
    parser.add_argument("--C", type=float, default=1.0)
    parser.add_argument("--tol", type=float, default=1e-3)
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    if not HAS_NUMBA:
        print("numba is not importable; timing the numpy backend only")
    backends = ("numpy", "numba") if HAS_NUMBA else ("numpy",)

    rng = np.random.default_rng(args.seed)
    header = "rows      iters" + "".join("%12s" % b for b in backends)
    if len(backends) == 2:
        header += "     speedup"
    print(header)
    for n_rows in [int(s) for s in args.sizes.split(",")]:
        ts = random_training_set(n_rows, args.dim, args.nnz, rng)
        times = {}
        iters = 0
        for backend in backends:
            times[backend], iters = time_backend(ts, args.C, args.tol,
                                                 backend, args.repeats)
        line = "%-8d %6d" % (n_rows, iters)
        line += "".join("%10.1fms" % (times[b] * 1e3) for b in backends)
        if len(backends) == 2:
            line += "%11.1fx" % (times["numpy"] / times["numba"])
        print(line)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
