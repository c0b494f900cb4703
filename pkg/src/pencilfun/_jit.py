"""Optional numba acceleration for the rotation-heavy inner loops.

The decorated functions are plain Python and run unmodified (slowly) when
numba is unavailable; results are bitwise identical either way.
"""

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(fn):
            return fn

        return wrap
