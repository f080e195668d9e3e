"""Numeric kernel backend selection.

Two interchangeable kernel modules exist: a compiled Cython extension
(``_ckernels``) and a pure NumPy fallback (``pykernels``). The compiled one is
preferred when importable; set ``RETROQ_BACKEND=python`` or
``RETROQ_BACKEND=compiled`` to force a choice. ``impl`` is the live module;
call sites always go through it so :func:`use` can swap backends at runtime
(used by the parity tests and the benchmark).
"""

from __future__ import annotations

import os

from . import pykernels

try:
    from . import _ckernels
except ImportError:
    _ckernels = None

_BY_NAME = {
    "python": pykernels,
    "compiled": _ckernels,
}


def available() -> tuple[str, ...]:
    """Names of the importable backends."""
    return tuple(name for name, mod in _BY_NAME.items() if mod is not None)


def use(name: str):
    """Select the active kernel backend by name; returns the module."""
    global impl
    mod = _BY_NAME.get(name)
    if mod is None:
        raise ValueError(
            f"backend {name!r} is not available; choose from {available()}"
        )
    impl = mod
    return mod


def _initial() -> str:
    forced = os.environ.get("RETROQ_BACKEND", "").strip().lower()
    if forced:
        if forced not in _BY_NAME or _BY_NAME[forced] is None:
            raise ImportError(
                f"RETROQ_BACKEND={forced!r} requested but only {available()} available"
            )
        return forced
    return "compiled" if _ckernels is not None else "python"


impl = _BY_NAME[_initial()]
