"""Kernel backend selection.

Hot combinatorial kernels are compiled with numba when it is importable.
Set ``FERMICON_BACKEND=numpy`` to force the pure-numpy fallback, or
``FERMICON_BACKEND=numba`` to require the compiled path (raises if numba
is missing).  The benchmark suite exercises both paths explicitly.
"""

import os
from functools import lru_cache

ENV_VAR = "FERMICON_BACKEND"


@lru_cache(maxsize=1)
def numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


def default_backend() -> str:
    """Resolve the active backend name ("numba" or "numpy")."""
    value = os.environ.get(ENV_VAR, "").strip().lower()
    if value == "numpy":
        return "numpy"
    if value == "numba":
        if not numba_available():
            raise RuntimeError(f"{ENV_VAR}=numba but numba is not importable")
        return "numba"
    if value:
        raise RuntimeError(f"unknown {ENV_VAR} value: {value!r}")
    return "numba" if numba_available() else "numpy"
