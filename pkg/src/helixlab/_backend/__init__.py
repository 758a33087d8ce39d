"""Kernel backend selection.

The hot kernels (expression-tape jet evaluation and the RK4 frame
integrator) exist twice: a numba-jitted version and a pure-numpy fallback
with identical semantics.  Selection order:

* env var ``HELIXLAB_BACKEND`` = ``numba`` | ``numpy`` | ``auto`` (default);
* under ``auto``, numba is used when it imports, numpy otherwise;
* :func:`use_backend` switches at runtime (used by tests and benchmarks).
"""

from __future__ import annotations

import logging
import os

log = logging.getLogger(__name__)

_ACTIVE = None


def get_backend(name: str):
    """Import and return a kernel module by name ('numpy' or 'numba')."""
    if name == "numpy":
        from . import np_kernels

        return np_kernels
    if name == "numba":
        from . import nb_kernels

        return nb_kernels
    raise ValueError(f"unknown backend {name!r} (expected 'numpy' or 'numba')")


def use_backend(name: str):
    """Force the active backend; returns the kernel module."""
    global _ACTIVE
    _ACTIVE = get_backend(name)
    return _ACTIVE


def active():
    """The currently selected kernel module (resolves the env flag once)."""
    global _ACTIVE
    if _ACTIVE is None:
        choice = os.environ.get("HELIXLAB_BACKEND", "auto").strip().lower()
        if choice in ("numpy", "numba"):
            _ACTIVE = get_backend(choice)
        elif choice in ("", "auto"):
            try:
                _ACTIVE = get_backend("numba")
            except ImportError:
                log.info("numba unavailable, falling back to the numpy kernels")
                _ACTIVE = get_backend("numpy")
        else:
            raise ValueError(
                f"HELIXLAB_BACKEND={choice!r} not understood; use numba, numpy or auto"
            )
        log.debug("kernel backend: %s", _ACTIVE.NAME)
    return _ACTIVE


def active_name() -> str:
    return active().NAME
