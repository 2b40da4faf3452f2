"""Shared fixtures and independent oracles for the test suite."""

import logging

import numpy as np
import pytest

from vortex_atlas.fieldlang import eval_field

logging.getLogger("vortex_atlas").setLevel(logging.ERROR)


# 4th-order central difference stencils; nested per axis for mixed partials
_D1 = ((-2, 1.0 / 12.0), (-1, -8.0 / 12.0), (1, 8.0 / 12.0), (2, -1.0 / 12.0))
_D2 = ((-2, -1.0 / 12.0), (-1, 16.0 / 12.0), (0, -30.0 / 12.0),
       (1, 16.0 / 12.0), (2, -1.0 / 12.0))


def fd_partial(fd, point, alpha, params=None, h=0.03):
    """Finite-difference estimate of a mixed partial derivative.

    Independent oracle for jet coefficients: pure function sampling, no
    series arithmetic.
    """
    alpha = list(alpha)
    axis = next((i for i, a in enumerate(alpha) if a > 0), None)
    if axis is None:
        return eval_field(fd, tuple(point), params)

    def shifted(steps):
        p = list(point)
        p[axis] += steps * h
        return p

    order = alpha[axis]
    rest = list(alpha)
    if order >= 2:
        rest[axis] = order - 2
        stencil, scale = _D2, h * h
    else:
        rest[axis] = order - 1
        stencil, scale = _D1, h
    total = 0.0 + 0.0j
    for steps, weight in stencil:
        total += weight * fd_partial(fd, shifted(steps), rest, params, h)
    return total / scale


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
