"""Backend selection for the finite-field kernels.

Set ``EO_THETA_NUMBA=0`` to force the pure-numpy path.  When numba is not
importable the numpy path is used regardless of the flag.
"""
import os

try:
    from numba import njit as _njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False
    _njit = None


def numba_requested():
    return os.environ.get("EO_THETA_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")


USE_NUMBA = HAVE_NUMBA and numba_requested()


def njit(*args, **kwargs):
    """``numba.njit`` with on-disk caching, or an identity decorator."""
    kwargs.setdefault("cache", True)
    if not HAVE_NUMBA:
        if args and callable(args[0]):
            return args[0]
        return lambda f: f
    return _njit(*args, **kwargs)
