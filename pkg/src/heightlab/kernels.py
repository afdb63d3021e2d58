"""Kernel backend selection.

The compiled extension is preferred; the pure-Python twin is used when it
is unavailable or when HEIGHTLAB_PURE_PYTHON is set.  Both expose the same
functions with bit-identical behaviour.
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("HEIGHTLAB_PURE_PYTHON"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

u64 = _impl.u64
u01 = _impl.u01
sweep = _impl.sweep
sweep_pair = _impl.sweep_pair

pure = _kernels_py
