"""Hot pixel kernels with two interchangeable backends.

The numba-jitted backend is the default. Set CAPOCR_NO_NUMBA=1 in the
environment to force the pure-numpy fallback (the numpy path is also used
automatically when numba is not importable). benchmarks/bench_kernels.py
times the two side by side.
"""

import os

from . import _numpy

_flag = os.environ.get("CAPOCR_NO_NUMBA", "").strip().lower()
if _flag in ("1", "true", "yes", "on"):
    _impl = _numpy
    USING_NUMBA = False
else:
    try:
        from . import _numba as _impl
        USING_NUMBA = True
    except ImportError:
        _impl = _numpy
        USING_NUMBA = False

correlate2d_replicate = _impl.correlate2d_replicate
window_stats_3x3 = _impl.window_stats_3x3
label_components = _impl.label_components
resize_bilinear = _impl.resize_bilinear
median3x3 = _impl.median3x3

__all__ = [
    "USING_NUMBA",
    "correlate2d_replicate",
    "window_stats_3x3",
    "label_components",
    "resize_bilinear",
    "median3x3",
]
