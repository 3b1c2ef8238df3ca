"""Backend selection for the numeric kernels.

Kernels are compiled with numba when it is importable, unless the
environment variable ``PHEKIT_DISABLE_NUMBA`` is set to a truthy value,
in which case the pure-numpy implementations are used.
"""

import os

NUMBA_FLAG = "PHEKIT_DISABLE_NUMBA"

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

NUMBA_ENABLED = numba is not None and os.environ.get(NUMBA_FLAG, "").lower() not in (
    "1",
    "true",
    "yes",
    "on",
)

numba_default = {"nogil": True, "cache": True, "boundscheck": False}


def njit(func):
    """Compile ``func`` with numba, or return it unchanged if numba is missing."""
    if numba is None:
        return func
    return numba.njit(**numba_default)(func)
