"""Optional numba acceleration.

Set ``SEXTICWARING_DISABLE_NUMBA=1`` to force the pure-numpy code paths.
The flag is read once at import time.
"""

import os

_DISABLED = os.environ.get("SEXTICWARING_DISABLE_NUMBA", "").strip().lower() in {
    "1",
    "true",
    "yes",
}

try:
    if _DISABLED:
        raise ImportError("numba disabled by environment")
    from numba import njit as _njit

    HAVE_NUMBA = True
except ImportError:
    _njit = None
    HAVE_NUMBA = False


def maybe_njit(func):
    """Compile ``func`` with numba when available; otherwise return ``None``."""
    if not HAVE_NUMBA:
        return None
    return _njit(cache=True)(func)
