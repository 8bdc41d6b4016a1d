"""Kernel backend selection.

The compiled extension is preferred when importable; the numpy twin is the
fallback. ``SQCOMP_BACKEND=python`` or ``=compiled`` forces a choice (the
benchmark and the backend-agreement tests use this).
"""

import os

from . import _kernels_py

_forced = os.environ.get("SQCOMP_BACKEND", "").strip().lower()

if _forced == "python":
    kernels = _kernels_py
elif _forced == "compiled":
    from . import _kernels as kernels  # type: ignore[no-redef]
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        kernels = _kernels_py


def backend_name():
    """Which kernel implementation is active: 'compiled' or 'python'."""
    return kernels.BACKEND
