"""Kernel backend selection.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
numpy fallback in ``_pykernels`` is used.  Set ``DDEBA_PURE_PYTHON=1`` to
force the fallback.  Both backends return bitwise-identical results.
"""

from __future__ import annotations

import os

from . import _pykernels

if os.environ.get("DDEBA_PURE_PYTHON", "") not in ("", "0"):
    _backend = _pykernels
else:
    try:
        from . import _ckernels as _backend
    except ImportError:  # extension not built
        _backend = _pykernels

BACKEND = "cython" if _backend is not _pykernels else "python"

STATUS_OK = _pykernels.STATUS_OK
STATUS_UNDEFINED = _pykernels.STATUS_UNDEFINED
STATUS_DEGENERATE = _pykernels.STATUS_DEGENERATE

gower_pairwise = _backend.gower_pairwise
gower_to_query = _backend.gower_to_query
ks_sorted = _backend.ks_sorted
ks_rows = _backend.ks_rows


def backends() -> dict:
    """All importable backends by name (used by the benchmark and tests)."""
    found = {"python": _pykernels}
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        found["cython"] = _ckernels
    return found
