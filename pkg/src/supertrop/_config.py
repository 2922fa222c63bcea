"""Runtime switches read from the environment.

``SUPERTROP_MAX_N``   enumeration cap for permanents (default 9).
``SUPERTROP_BACKEND`` ``numba`` (default when importable) or ``numpy``.
"""

import os
from contextlib import contextmanager

DEFAULT_MAX_N = 9
_max_n_override = None


@contextmanager
def max_n_override(value: int):
    """Temporarily replace the cap (used by the CLI ``--max-n`` flag)."""
    global _max_n_override
    saved = _max_n_override
    _max_n_override = value
    try:
        yield
    finally:
        _max_n_override = saved


def max_n() -> int:
    if _max_n_override is not None:
        return _max_n_override
    raw = os.environ.get("SUPERTROP_MAX_N")
    if not raw:
        return DEFAULT_MAX_N
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"SUPERTROP_MAX_N must be an integer, got {raw!r}") from None
    if value < 0:
        raise ValueError("SUPERTROP_MAX_N must be non-negative")
    return value


def requested_backend() -> str:
    backend = os.environ.get("SUPERTROP_BACKEND", "numba").strip().lower()
    if backend not in ("numba", "numpy"):
        raise ValueError(f"SUPERTROP_BACKEND must be 'numba' or 'numpy', got {backend!r}")
    return backend
