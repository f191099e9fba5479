"""Backend selection for the hot kernels.

The compiled extension is preferred when it imported cleanly; setting
``RELIEFOPT_PURE_PYTHON=1`` forces the numpy fallback.  Both backends share
one signature set, see ``pure.py``.
"""
import os

from . import pure as _pure

if os.environ.get("RELIEFOPT_PURE_PYTHON"):
    _impl = _pure
else:
    try:
        from . import _native as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _pure

BACKEND = "cython" if _impl is not _pure else "python"

evaluate_flows = _impl.evaluate_flows
greedy_fill = _impl.greedy_fill
domination_matrix = _impl.domination_matrix

__all__ = ["BACKEND", "evaluate_flows", "greedy_fill", "domination_matrix"]
