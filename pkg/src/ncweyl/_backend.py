"""Kernel backend selection.

The compiled extension is preferred when importable; the pure-Python
reference takes over otherwise.  Set NCWEYL_PURE_PYTHON=1 to force the
fallback (useful for debugging and for the backend benchmark).
"""

import os

if os.environ.get("NCWEYL_PURE_PYTHON"):
    from . import _kernels_py as kernels
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        from . import _kernels_py as kernels  # type: ignore[no-redef]


def backend_name() -> str:
    """Name of the active kernel backend: "cython" or "python"."""
    return kernels.BACKEND
