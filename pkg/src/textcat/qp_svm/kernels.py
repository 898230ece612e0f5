"""Backend selection for the solver loop.

TEXTCAT_NUMBA controls the choice: "1" (or "numba") requires the jit
backend, "0" (or "numpy") forces the fallback, anything else or unset
means use numba when importable. An explicit `backend` argument to
solve_dual overrides the environment.
"""

from __future__ import annotations

import os

from ..errors import ConfigError
from . import _kernels_numpy

try:
    from . import _kernels_numba

    HAS_NUMBA = True
except ImportError:
    _kernels_numba = None  # type: ignore[assignment]
    HAS_NUMBA = False

_FORCE_NUMBA = frozenset({"1", "numba", "true", "on"})
_FORCE_NUMPY = frozenset({"0", "numpy", "false", "off"})


def resolve_backend(name: str | None = None):
    """Map a backend request to ("numpy"|"numba", solve_smo callable)."""
    if name is None:
        name = os.environ.get("TEXTCAT_NUMBA", "auto")
    key = name.strip().lower() or "auto"
    if key in _FORCE_NUMBA:
        if not HAS_NUMBA:
            raise ConfigError("numba backend requested but numba is not importable")
        return "numba", _kernels_numba.solve_smo
    if key in _FORCE_NUMPY:
        return "numpy", _kernels_numpy.solve_smo
    if key == "auto":
        if HAS_NUMBA:
            return "numba", _kernels_numba.solve_smo
        return "numpy", _kernels_numpy.solve_smo
    raise ConfigError(f"unknown solver backend {name!r}")
