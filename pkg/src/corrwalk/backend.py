"""Kernel backend selection: compiled extension with a numpy fallback.

The compiled module is preferred when importable.  Set the environment
variable ``CORRWALK_BACKEND`` to ``python`` or ``compiled`` before import
to force a choice; :func:`use` switches temporarily within a process
(benchmarks, cross-backend tests).
"""
from __future__ import annotations

import os
from contextlib import contextmanager

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built; run on the numpy fallback
    _compiled = None

_NAMES = {"compiled": _compiled, "python": _kernels_py}


def _select(name: str):
    name = name.strip().lower()
    if name in ("", "auto"):
        return _compiled if _compiled is not None else _kernels_py
    if name not in _NAMES:
        raise ValueError(f"unknown kernel backend {name!r}; use 'compiled' or 'python'")
    if _NAMES[name] is None:
        raise ImportError("compiled kernel backend requested but the extension is not built")
    return _NAMES[name]


active = _select(os.environ.get("CORRWALK_BACKEND", "auto"))


def kernel_backend() -> str:
    """Name of the backend currently in use ('compiled' or 'python')."""
    return "compiled" if active is _compiled else "python"


def available_backends() -> tuple[str, ...]:
    return tuple(name for name, mod in _NAMES.items() if mod is not None)


@contextmanager
def use(name: str):
    """Temporarily run with the named backend."""
    global active
    previous = active
    active = _select(name)
    try:
        yield active
    finally:
        active = previous
