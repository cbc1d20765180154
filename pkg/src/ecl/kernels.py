"""Backend selection for the hot loops.

The compiled module ``_ckernels`` is used when it was built; otherwise the
pure-Python module with identical semantics is used. Setting ``ECL_PURE_PYTHON=1``
in the environment forces the fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py
from ._kernels_py import OP_AND, OP_CONST, OP_EQ, OP_NOT, OP_OR, OP_REL  # noqa: F401

try:
    if os.environ.get("ECL_PURE_PYTHON"):
        raise ImportError("pure Python requested")
    from . import _ckernels as _impl

    BACKEND = "cython"
except ImportError:
    _impl = _kernels_py
    BACKEND = "python"

admissible_partitions = _impl.admissible_partitions
filtered_partitions = _impl.filtered_partitions
congruence_reps = _impl.congruence_reps


def backends() -> dict:
    """Every importable backend, keyed by name (used by tests and benchmarks)."""
    out = {"python": _kernels_py}
    try:
        from . import _ckernels

        out["cython"] = _ckernels
    except ImportError:
        pass
    return out
