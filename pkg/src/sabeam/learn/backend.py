"""Kernel backend selection.

The compiled ``_cart`` extension is used when it imports; otherwise (or when
``SABEAM_PURE_PYTHON`` is set to a non-empty value) the numpy fallback is.
"""
import logging
import os

from . import _cart_py

log = logging.getLogger(__name__)


def _load_compiled():
    try:
        from . import _cart
    except ImportError:
        return None
    return _cart


_compiled = _load_compiled()

if _compiled is not None and not os.environ.get("SABEAM_PURE_PYTHON"):
    kernels = _compiled
    BACKEND = "cython"
else:
    kernels = _cart_py
    BACKEND = "python"
    if _compiled is None:
        log.debug("compiled CART kernel not available, using numpy fallback")


def available_backends():
    names = ["python"]
    if _compiled is not None:
        names.insert(0, "cython")
    return names


def get_kernels(name=None):
    """Return the kernel module for ``name`` ("cython"/"python"), default active."""
    if name is None:
        return kernels
    if name == "python":
        return _cart_py
    if name == "cython":
        if _compiled is None:
            raise ImportError("compiled CART kernel is not built")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")
