"""Kernel backend selection.

Hot kernels exist in two variants: loop-nest versions compiled with
numba's @njit and vectorized pure-numpy fallbacks.  The environment
variable FREQFEAT_BACKEND picks one:

    auto   (default) use numba when importable, numpy otherwise
    numba  require numba; raise if it cannot be imported
    numpy  force the pure-numpy path even when numba is present

Both paths compute identical results (within last-bit rounding); the
flag only trades compile latency against per-call speed.  See
benchmarks/bench_kernels.py for a comparison.
"""

import os

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only on stripped installs
    njit = None
    HAVE_NUMBA = False

_ENV_VAR = "FREQFEAT_BACKEND"
_VALID = ("auto", "numba", "numpy")


def backend_name() -> str:
    """Resolve the active backend ("numba" or "numpy") from the environment."""
    choice = os.environ.get(_ENV_VAR, "auto").strip().lower()
    if choice not in _VALID:
        raise ValueError(
            f"{_ENV_VAR} must be one of {_VALID}, got {choice!r}"
        )
    if choice == "numpy":
        return "numpy"
    if choice == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError(f"{_ENV_VAR}=numba but numba is not importable")
        return "numba"
    return "numba" if HAVE_NUMBA else "numpy"


def use_numba() -> bool:
    return backend_name() == "numba"


def jit(func):
    """Compile with numba when available, otherwise return func unchanged."""
    if HAVE_NUMBA:
        return njit(cache=True)(func)
    return func
