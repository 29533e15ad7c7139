"""Kernel backend selection.

The compiled extension `minclue._kernels` is preferred when importable;
otherwise the pure-Python kernels are used.  Set MINCLUE_BACKEND=python or
MINCLUE_BACKEND=native to force a choice (forcing an unavailable native
backend raises on import).
"""

from __future__ import annotations

import os

from . import _pykernels


def _load():
    choice = os.environ.get("MINCLUE_BACKEND", "").strip().lower()
    if choice not in ("", "native", "python", "py"):
        raise RuntimeError(f"unknown MINCLUE_BACKEND value {choice!r}")
    if choice in ("python", "py"):
        return _pykernels
    try:
        from . import _kernels  # type: ignore[attr-defined]

        return _kernels
    except ImportError:
        if choice == "native":
            raise
        return _pykernels


kernels = _load()


def backend_name() -> str:
    return kernels.BACKEND_NAME


def available_backends() -> dict:
    """Importable backends by name; used by tests and the benchmark."""
    out = {"python": _pykernels}
    try:
        from . import _kernels  # type: ignore[attr-defined]

        out["native"] = _kernels
    except ImportError:
        pass
    return out
