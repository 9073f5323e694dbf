"""Kernel backend selection.

The compiled Cython module is used when it is importable; otherwise the numpy
reference versions are used. Set ``MEMQEC_PURE_PYTHON=1`` to force the
fallback.
"""

import os

import numpy as np

from memqec import _pykernels

if os.environ.get("MEMQEC_PURE_PYTHON", "") not in ("", "0"):
    _backend = None
else:
    try:
        from memqec import _ckernels as _backend
    except ImportError:
        _backend = None

if _backend is None:
    BACKEND = "python"
    restricted_traces = _pykernels.restricted_traces
    poly_eval_grid = _pykernels.poly_eval_grid
else:
    BACKEND = "cython"

    def restricted_traces(bras, kets, x_masks, z_masks):
        return _backend.restricted_traces(
            np.ascontiguousarray(bras, dtype=np.complex128),
            np.ascontiguousarray(kets, dtype=np.complex128),
            np.ascontiguousarray(x_masks, dtype=np.int64),
            np.ascontiguousarray(z_masks, dtype=np.int64),
        )

    def poly_eval_grid(coeffs, mu, p):
        return _backend.poly_eval_grid(
            np.ascontiguousarray(coeffs, dtype=np.float64),
            np.ascontiguousarray(mu, dtype=np.float64),
            np.ascontiguousarray(p, dtype=np.float64),
        )

__all__ = ["BACKEND", "restricted_traces", "poly_eval_grid"]
