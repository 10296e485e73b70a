"""Backend selection for the hot kernels.

Tries the compiled extension first and falls back to the pure numpy
implementation.  Set NULLCURVES_KERNELS=python to force the fallback (used
by the cross-backend tests and the benchmark).
"""

import os

from . import _kernels_py

if os.environ.get("NULLCURVES_KERNELS", "").lower() == "python":
    _impl = _kernels_py
else:
    try:
        from . import _kernels_cy as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

BACKEND = _impl.BACKEND

horner_eval = _impl.horner_eval
min_dist2 = _impl.min_dist2
min_dist2_grouped = _impl.min_dist2_grouped
dijkstra_polar = _impl.dijkstra_polar
pair_scan = _impl.pair_scan
