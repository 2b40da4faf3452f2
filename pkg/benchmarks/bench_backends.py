#!/usr/bin/env python3
"""Compare the compiled series-product kernel with the NumPy fallback.

Run after installing the package:

    python benchmarks/bench_backends.py

The pure backend can also be forced for the whole package with
VORTEX_ATLAS_PURE=1; this script calls both implementations directly so a
single run reports both numbers.
"""

import time

import numpy as np

from vortex_atlas import _kernels_py, backend
from vortex_atlas.catalog import catalog_get
from vortex_atlas.fieldlang import eval_field_jet
from vortex_atlas.taylor import mul_table


def _time(fn, reps):
    fn()  # warm up
    t0 = time.perf_counter()
    for _ in range(reps):
        fn()
    return (time.perf_counter() - t0) / reps


def bench_mul(nvars, order, reps=2000):
    rng = np.random.default_rng(12345)
    table = mul_table(nvars, order)
    a = rng.standard_normal(table.size) + 1j * rng.standard_normal(table.size)
    b = rng.standard_normal(table.size) + 1j * rng.standard_normal(table.size)

    def compiled():
        return backend.series_product(a, b, table)

    def pure():
        return _kernels_py.mul_coeffs(a, b, table)

    assert np.allclose(compiled(), pure())
    return _time(compiled, reps), _time(pure, reps), table.size, len(table.ii)


def bench_jet(reps=200):
    fd = catalog_get("H2.helmholtz-cusp")

    def run():
        return eval_field_jet(fd, (0.1, -0.2), order=6)

    return _time(run, reps)


def main():
    print(f"active backend: {backend.backend_name()}")
    print()
    print(f"{'shape':>14} {'coeffs':>7} {'pairs':>7} "
          f"{'compiled':>12} {'pure numpy':>12} {'speedup':>8}")
    for nvars, order in ((2, 6), (3, 6), (4, 8)):
        tc, tp, n, pairs = bench_mul(nvars, order)
        print(f"  nvars={nvars} ord={order} {n:>7} {pairs:>7} "
              f"{tc * 1e6:>10.2f}us {tp * 1e6:>10.2f}us {tp / tc:>7.1f}x")
    print()
    tj = bench_jet()
    print(f"order-6 jet of a trigonometric catalog field: {tj * 1e3:.3f} ms "
          f"({backend.backend_name()} backend)")


if __name__ == "__main__":
    main()
