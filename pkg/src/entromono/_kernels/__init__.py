"""Backend selection for the hot kernels.

The compiled extension is used when it imports; setting ``ENTROMONO_PURE=1``
forces the numpy/Python fallback.  ``BACKEND`` names the active choice.
"""

from __future__ import annotations

import os

from . import _pykernels

try:
    if os.environ.get("ENTROMONO_PURE", "") in ("1", "true", "yes"):
        raise ImportError("pure backend requested")
    from . import _ckernels as _impl  # type: ignore[attr-defined]

    BACKEND = "cython"
except ImportError:
    _impl = _pykernels
    BACKEND = "python"

sumset_codes = _impl.sumset_codes
min_cover = _impl.min_cover
sumset_tuples = _pykernels.sumset_tuples


def available_backends() -> dict[str, object]:
    out: dict[str, object] = {"python": _pykernels}
    try:
        from . import _ckernels  # type: ignore[attr-defined]

        out["cython"] = _ckernels
    except ImportError:
        pass
    return out
