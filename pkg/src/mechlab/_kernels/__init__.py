"""Kernel backend selection.

The hot inner loop of every fuzzing campaign is the misreport scan
(mechanism evaluation over a grid of candidate reports plus compass
refinement).  A Cython extension implements it in C; a NumPy fallback
with identical semantics is selected when the extension is not built.

Set MECHLAB_BACKEND=compiled|fallback to force a choice ("compiled"
raises if the extension is missing); default is auto-detection.
"""

from __future__ import annotations

import os


def get_backend(name: str):
    """Return a kernel module by name ("compiled" or "fallback")."""
    if name == "fallback":
        from . import _py

        return _py
    if name == "compiled":
        from . import _core  # type: ignore[attr-defined]

        return _core
    raise ValueError(f"unknown kernel backend {name!r}")


def _select():
    forced = os.environ.get("MECHLAB_BACKEND", "").strip().lower()
    if forced in ("compiled", "fallback"):
        return get_backend(forced)
    if forced and forced != "auto":
        raise ValueError(f"MECHLAB_BACKEND must be 'compiled', 'fallback' or 'auto', got {forced!r}")
    try:
        return get_backend("compiled")
    except ImportError:
        return get_backend("fallback")


impl = _select()
BACKEND = impl.BACKEND_NAME

eval_mechanism = impl.eval_mechanism
misreport_scan = impl.misreport_scan
