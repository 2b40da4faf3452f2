"""Backend selection for the series-product kernel.

The compiled extension is used when it imported successfully; setting
``VORTEX_ATLAS_PURE=1`` forces the NumPy fallback (useful for testing and
benchmarking). Batched coefficient arrays always take the NumPy path,
which is vectorized over the sample axis.
"""

import os

import numpy as np

from . import _kernels_py

_compiled = None
if os.environ.get("VORTEX_ATLAS_PURE", "0").lower() not in ("1", "true", "yes"):
    try:
        from . import _mulkernel as _compiled  # type: ignore[no-redef]
    except ImportError:
        _compiled = None

BACKEND_NAME = "compiled" if _compiled is not None else "pure-python"


def backend_name():
    return BACKEND_NAME


def series_product(a, b, table):
    """Truncated product of coefficient arrays `a` and `b`."""
    if _compiled is not None and a.ndim == 1 and b.ndim == 1:
        out = np.zeros(table.size, dtype=np.complex128)
        _compiled.mul_into(a, b, out, table.ii, table.jj, table.kk)
        return out
    return _kernels_py.mul_coeffs(a, b, table)
