"""Selection of the accelerated kernel path.

The pointwise hot kernels (reaction right-hand sides, implicit per-mode
updates, residual reductions) ship in two versions: a numba ``@njit`` one
and a pure-numpy twin.  The numba path is used by default; setting the
environment variable ``FRACRD_PURE_NUMPY=1`` (or ``true``/``yes``/``on``)
before import forces the numpy path.  The flag exists so the two paths can
be compared (see ``benchmarks/bench_kernels.py``) and so the package keeps
working on platforms where numba is unavailable.
"""

from __future__ import annotations

import os

ENV_FLAG = "FRACRD_PURE_NUMPY"


def _flag_set() -> bool:
    return os.environ.get(ENV_FLAG, "").strip().lower() in {"1", "true", "yes", "on"}


def _numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


PURE_NUMPY_REQUESTED = _flag_set()
NUMBA_AVAILABLE = _numba_available()
NUMBA_ENABLED = NUMBA_AVAILABLE and not PURE_NUMPY_REQUESTED


def using_numba() -> bool:
    """True when the numba kernel path was selected at import time."""
    return NUMBA_ENABLED
