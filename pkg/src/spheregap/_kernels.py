"""Kernel backend selection.

The compiled Cython extension is used when present; setting the environment
variable SPHEREGAP_PURE_PYTHON=1 forces the numpy fallback. Both backends
expose the same functions and are compared in benchmarks/bench_kernels.py.
"""
import os

_force_py = os.environ.get("SPHEREGAP_PURE_PYTHON", "").strip() not in ("", "0")

if _force_py:
    from . import _kernels_np as _impl

    BACKEND = "numpy"
else:
    try:
        from . import _kernels_cy as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        from . import _kernels_np as _impl

        BACKEND = "numpy"

hyp2f1_batch = _impl.hyp2f1_batch
local_matrices = _impl.local_matrices


def backend() -> str:
    """Name of the active kernel backend ("cython" or "numpy")."""
    return BACKEND
