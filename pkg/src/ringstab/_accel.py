"""Optional numba dependency.

Set ``RINGSTAB_NUMBA=0`` to force the pure-numpy code paths. The flag is read
once at import time; ``use_numba()`` reports the active choice.
"""
import os

try:
    import numba
    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    _HAVE_NUMBA = False

_ENABLED = _HAVE_NUMBA and os.environ.get("RINGSTAB_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")


def use_numba():
    return _ENABLED


def njit(*args, **kwargs):
    """``numba.njit(cache=True)`` when numba is installed, else a no-op decorator."""
    if not _HAVE_NUMBA:
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f
    kwargs.setdefault("cache", True)
    return numba.njit(*args, **kwargs)
