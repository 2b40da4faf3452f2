"""Pure-NumPy kernel for the truncated series product.

This is the fallback backend and also the only path for batched
coefficients (shape ``(ncoeff, nsamples)``), where the work is already
vectorized over the sample axis.
"""

import numpy as np


def mul_coeffs(a, b, table):
    """Cauchy product of two coefficient arrays, truncated by `table`.

    The pair table is pre-sorted by output slot, so a single
    ``add.reduceat`` accumulates every product into its slot.
    """
    if a.ndim == 1 and b.ndim == 2:
        a = a[:, None]
    elif b.ndim == 1 and a.ndim == 2:
        b = b[:, None]
    contrib = a[table.ii] * b[table.jj]
    return np.add.reduceat(contrib, table.seg_starts, axis=0)
