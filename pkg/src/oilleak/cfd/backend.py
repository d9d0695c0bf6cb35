"""Kernel backend selection.

The hot loops ship in two functionally identical flavours: numba
@njit-compiled loops (default) and pure-numpy vectorized fallbacks.
Set OILLEAK_BACKEND=numpy to force the fallback, =numba to require the
compiled path, or leave it at auto to use numba when importable.

``benchmarks/bench_backends.py`` times the two against each other.
"""

from __future__ import annotations

import os

_ENV_VAR = "OILLEAK_BACKEND"
_VALID = ("auto", "numba", "numpy")


def _select():
    choice = os.environ.get(_ENV_VAR, "auto").strip().lower()
    if choice not in _VALID:
        raise RuntimeError(
            f"{_ENV_VAR}={choice!r} not understood; pick one of {_VALID}")
    if choice == "numpy":
        from . import kernels_numpy
        return kernels_numpy, "numpy"
    try:
        from . import kernels_numba
        return kernels_numba, "numba"
    except ImportError:
        if choice == "numba":
            raise
        from . import kernels_numpy
        return kernels_numpy, "numpy"


kernels, BACKEND = _select()
USING_NUMBA = BACKEND == "numba"
