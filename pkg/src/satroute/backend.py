"""Selects the routing-kernel implementation at import time.

The compiled extension `_core_cy` is preferred when present; the pure-Python
module `_core_py` implements the same interface and is used otherwise.  Set
SATROUTE_BACKEND=python|cython to force a choice (useful for the differential
tests and the backend benchmark).
"""
from __future__ import annotations

import os

from . import _core_py

_requested = os.environ.get("SATROUTE_BACKEND", "auto").strip().lower()

if _requested in ("", "auto"):
    try:
        from . import _core_cy as kernels  # type: ignore[attr-defined]
    except ImportError:
        kernels = _core_py
elif _requested in ("python", "py"):
    kernels = _core_py
elif _requested in ("cython", "cy", "c"):
    from . import _core_cy as kernels  # type: ignore[attr-defined]
else:
    raise ImportError(f"unknown SATROUTE_BACKEND value: {_requested!r}")


def backend_name() -> str:
    """Name of the active kernel implementation ("python" or "cython")."""
    return kernels.BACKEND_NAME
