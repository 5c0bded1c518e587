"""Numba switch.

Kernels are written as plain loops over numpy arrays and compiled with
``numba.njit`` when available. Setting ``FPCOMM_DISABLE_NUMBA=1`` (or running
without numba installed) keeps the uncompiled functions, and the modules that
have a vectorized numpy route use it instead of the loop kernels.
"""

import os

_FALSY = {"", "0", "false", "no", "off"}

try:
    import numba  # noqa: F401

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("FPCOMM_DISABLE_NUMBA", "").strip().lower() in _FALSY


def njit(func=None, **kwargs):
    """``numba.njit`` when acceleration is enabled, identity otherwise.

    The original Python function stays reachable through ``.py_func`` in both
    modes, so tests can run the two paths side by side.
    """

    def wrap(f):
        if USE_NUMBA:
            from numba import njit as _njit

            kwargs.setdefault("cache", True)
            return _njit(**kwargs)(f)
        f.py_func = f
        return f

    if func is not None:
        return wrap(func)
    return wrap


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
