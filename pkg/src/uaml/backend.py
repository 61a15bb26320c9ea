"""Kernel backend selection.

Hot numeric loops are written once in nopython-compatible style and either
compiled with numba (default) or executed as plain Python over numpy scalars.
Set UAML_BACKEND=numpy to force the fallback; UAML_BACKEND=numba to require
the compiled path.
"""

from __future__ import annotations

import functools
import os

import numpy as np

_CHOICE = os.environ.get("UAML_BACKEND", "").strip().lower()

if _CHOICE not in ("", "numba", "numpy"):
    raise RuntimeError(f"UAML_BACKEND must be 'numba' or 'numpy', got {_CHOICE!r}")

if _CHOICE == "numpy":
    _USE_NUMBA = False
else:
    try:
        import numba  # noqa: F401

        _USE_NUMBA = True
    except ImportError:
        if _CHOICE == "numba":
            raise
        _USE_NUMBA = False


def backend_name() -> str:
    return "numba" if _USE_NUMBA else "numpy"


def jit_kernel(func):
    """Compile ``func`` with numba, or wrap it to tolerate uint64 wraparound.

    The fallback wrapper is needed because the kernels rely on modular
    uint64 arithmetic, which numpy scalars report as overflow.
    """
    if _USE_NUMBA:
        from numba import njit

        return njit(cache=True)(func)

    @functools.wraps(func)
    def wrapper(*args):
        with np.errstate(over="ignore"):
            return func(*args)

    wrapper.py_func = func
    return wrapper
