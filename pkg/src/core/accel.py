import logging

logger = logging.getLogger(__name__)

try:
    from numba import config as numba_config
    from numba import njit, prange, set_num_threads

    HAVE_NUMBA = True

except ImportError:
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and hasattr(args[0], "__call__"):
            return args[0]

        def _f(f):
            return f
        return _f

    prange = range

    def set_num_threads(n):
        pass


def limit_threads(n: int) -> None:
    """Cap the worker count of compiled parallel kernels (0 keeps the default)."""
    if n and n > 0 and HAVE_NUMBA:
        set_num_threads(min(n, numba_config.NUMBA_NUM_THREADS))
        logger.debug("numba threads capped at %d", n)
