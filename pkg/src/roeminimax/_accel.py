"""Backend selection for the hot kernels.

Set ``ROEMINIMAX_DISABLE_NUMBA=1`` (before import) to force the pure-numpy
path even when numba is installed.
"""
import os

_DISABLED = os.environ.get("ROEMINIMAX_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes")

try:
    if _DISABLED:
        raise ImportError
    from numba import njit as _njit

    NUMBA_AVAILABLE = True
except ImportError:
    NUMBA_AVAILABLE = False
    _njit = None

BACKEND = "numba" if NUMBA_AVAILABLE else "numpy"


def njit_opts():
    return dict(cache=True, nogil=True, fastmath=False, error_model="numpy")


def maybe_njit(fn):
    """Compile ``fn`` with numba when available, otherwise return ``None``."""
    if not NUMBA_AVAILABLE:
        return None
    return _njit(**njit_opts())(fn)
