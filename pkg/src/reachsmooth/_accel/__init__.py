"""Scan-kernel backend selection.

Prefers the compiled extension when it imported cleanly; the env var
``REACHSMOOTH_FORCE_PY=1`` pins the numpy fallback (used by tests and the
backend benchmark).  Both backends implement the same reduction order, so
results are bit-identical either way.
"""

import os

from . import _slow

if os.environ.get("REACHSMOOTH_FORCE_PY") == "1":
    _impl = _slow
else:
    try:
        from . import _fast as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _slow

IMPLEMENTATION = _impl.IMPLEMENTATION

federer_scan = _impl.federer_scan
max_abs_diff_quotient = _impl.max_abs_diff_quotient
directed_hausdorff = _impl.directed_hausdorff

__all__ = [
    "IMPLEMENTATION",
    "federer_scan",
    "max_abs_diff_quotient",
    "directed_hausdorff",
]
