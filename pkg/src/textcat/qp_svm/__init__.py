"""Dual solver for the linear soft-margin classifier."""

from .kernels import HAS_NUMBA, resolve_backend
from .solver import (
    DualSolution,
    Hyperplane,
    KktReport,
    TrainingSet,
    compute_slacks,
    extract_hyperplane,
    kkt_report,
    solve_dual,
)

__all__ = [
    "DualSolution",
    "HAS_NUMBA",
    "Hyperplane",
    "KktReport",
    "TrainingSet",
    "compute_slacks",
    "extract_hyperplane",
    "kkt_report",
    "resolve_backend",
    "solve_dual",
]
