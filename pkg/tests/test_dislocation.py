"""Zero scanning, Newton refinement, curve tracing, parameter sweeps."""

import numpy as np
import pytest

from vortex_atlas.catalog import catalog_get
from vortex_atlas.dislocation import (
    Region,
    refine_zero,
    scan_zeros_2d,
    sweep_parameter,
    trace_dislocation_3d,
)
from vortex_atlas.errors import EvalError, ShapeError, SingularJacobian
from vortex_atlas.fieldlang import (
    RadialTransform,
    compose_radial,
    eval_field,
    field_from_text,
)

R2 = Region.cube(-1.0, 1.0, dim=2, res=101)
R3 = Region.cube(-1.0, 1.0, dim=3, res=101)


def test_region_validation():
    with pytest.raises(ShapeError):
        Region(((1.0, 0.0), (0.0, 1.0)), (101, 101))
    with pytest.raises(ShapeError):
        Region(((0.0, 1.0), (0.0, 1.0)), (101, 1))


def test_scan_regular_single_zero():
    pts = scan_zeros_2d(catalog_get("H2.regular"), R2)
    assert len(pts) == 1
    assert pts[0].location == pytest.approx((0.0, 0.0), abs=1e-12)
    assert pts[0].residual < 1e-10 * 2


def test_scan_cusp_family_three_zeros():
    pts = scan_zeros_2d(catalog_get("H2.cusp-family"), R2, {"a": 0.25})
    locs = sorted(p.location for p in pts)
    assert len(locs) == 3
    assert locs[0] == pytest.approx((-0.5, -0.25), abs=1e-8)
    assert locs[1] == pytest.approx((0.0, -0.25), abs=1e-8)
    assert locs[2] == pytest.approx((0.5, -0.25), abs=1e-8)


def test_scan_empty_when_no_zero():
    assert scan_zeros_2d(catalog_get("H2.Ht"), R2, {"t": 0.25}) == []


def test_scan_degenerate_zero_kept_once():
    pts = scan_zeros_2d(catalog_get("H2.hyperbolic"), R2)
    assert len(pts) == 1
    assert pts[0].degenerate
    pts = scan_zeros_2d(catalog_get("H2.cusp-family"), R2, {"a": 0.0})
    assert len(pts) == 1
    assert pts[0].location == pytest.approx((0.0, 0.0), abs=1e-4)


def test_scan_rejects_3d_field():
    with pytest.raises(ShapeError):
        scan_zeros_2d(catalog_get("H3.DH"), R2)


def test_scanned_zeros_reevaluate_small():
    fd = catalog_get("H2.helmholtz-cusp")
    for p in scan_zeros_2d(fd, R2):
        assert abs(eval_field(fd, p.location)) < 1e-10 * 2


def test_resolution_doubling_never_loses_zeros():
    for name, params in (("H2.hyperbolic", None),
                         ("H2.cusp-family", {"a": 0.25}),
                         ("H2.helmholtz-hyperbolic", None)):
        fd = catalog_get(name)
        coarse = scan_zeros_2d(fd, R2, params)
        fine = scan_zeros_2d(
            fd, Region.cube(-1.0, 1.0, dim=2, res=201), params)
        assert len(fine) >= len(coarse)


def test_refine_linear_field():
    p = refine_zero(catalog_get("H2.regular"), (0.1, 0.05))
    assert p.location == pytest.approx((0.0, 0.0), abs=1e-12)
    assert p.newton_iters <= 3


def test_refine_cusp_family():
    p = refine_zero(catalog_get("H2.cusp-family"), (0.45, -0.2),
                    params={"a": 0.25})
    assert p.location == pytest.approx((0.5, -0.25), abs=1e-10)


def test_refine_singular_jacobian():
    with pytest.raises(SingularJacobian):
        refine_zero(catalog_get("H2.hyperbolic"), (0.0, 0.0))


def test_refine_jet_attached():
    p = refine_zero(catalog_get("H2.regular"), (0.2, -0.1))
    assert p.jet.order >= 3
    assert abs(complex(p.jet.constant_term)) < 1e-10


# -- 3-D tracing ------------------------------------------------------------------

def test_trace_circle():
    curves = trace_dislocation_3d(catalog_get("H3.DHt"), R3, {"t": -0.25})
    assert len(curves) == 1
    c = curves[0]
    assert c.closed
    assert np.array_equal(c.points[0], c.points[-1])
    radii = np.hypot(c.points[:, 0], c.points[:, 1])
    assert np.max(np.abs(radii - 0.5)) < 1e-6
    assert np.max(np.abs(c.points[:, 2])) < 1e-6


def test_trace_point_zero_flagged():
    curves = trace_dislocation_3d(catalog_get("H3.DEt"), R3, {"t": 0.0})
    assert len(curves) == 1
    assert curves[0].degenerate_point
    assert curves[0].points[0] == pytest.approx((0.0, 0.0, 0.0), abs=1e-8)


def test_trace_hyperbola_branches():
    curves = trace_dislocation_3d(catalog_get("H3.It"), R3, {"t": 0.25})
    assert len(curves) == 2
    for c in curves:
        assert not c.closed
        assert c.boundary_open
        assert np.max(np.abs(c.points[:, 0] ** 2 - c.points[:, 1] ** 2
                             + 0.25)) < 1e-8
        assert np.max(np.abs(c.points[:, 2])) < 1e-8
    signs = sorted(float(np.sign(c.points[:, 1]).mean()) for c in curves)
    assert signs == [-1.0, 1.0]


def test_trace_vertex_residuals():
    curves = trace_dislocation_3d(catalog_get("H3.cusp"), R3)
    fd = catalog_get("H3.cusp")
    for c in curves:
        for p in c.points[::25]:
            assert abs(eval_field(fd, tuple(p))) < 1e-9


def test_trace_segment_continuity():
    curves = trace_dislocation_3d(catalog_get("H3.DHt"), R3, {"t": -0.25})
    c = curves[0]
    steps = np.linalg.norm(np.diff(c.points, axis=0), axis=1)
    assert steps.max() < 2.0 * R3.cell_diagonal()


# -- sweeps -----------------------------------------------------------------------

def test_sweep_ht_counts_events():
    sw = sweep_parameter(catalog_get("H2.Ht"), R2, "t", [-0.25, 0.0, 0.25])
    assert sw.counts == [2, 1, 0]
    assert sw.events == [((-0.25, 0.0), 2, 1), ((0.0, 0.25), 1, 0)]
    locs = sorted(p.location for p in sw.zero_sets[0])
    assert locs[0] == pytest.approx((-0.5, 0.0), abs=1e-8)
    assert locs[1] == pytest.approx((0.5, 0.0), abs=1e-8)


def test_sweep_cusp_family_counts():
    sw = sweep_parameter(catalog_get("H2.cusp-family"), R2, "a",
                         [-0.25, 0.0, 0.25])
    assert sw.counts == [1, 1, 3]
    assert len(sw.events) == 1
    assert sw.events[0][0] == (0.0, 0.25)


def test_sweep_constant_field_no_events():
    fd = field_from_text("c", "x + i*y + t", time_dependent=True)
    sw = sweep_parameter(fd, R2, "t", [0.0, 0.0, 0.0])
    assert sw.events == []


def test_sweep_requires_declared_parameter():
    with pytest.raises(EvalError):
        sweep_parameter(catalog_get("H2.regular"), R2, "a", [0.0])


# -- radial equivariance of zero sets ------------------------------------------------

def test_zero_set_equivariance(rng):
    fd = catalog_get("H2.cusp-family")
    params = {"a": 0.25}
    base = sorted(p.location for p in scan_zeros_2d(fd, R2, params))
    tr = RadialTransform.from_text(((1.2, 0.3), (-0.2, 0.8)),
                                   "exp(0.2*u - 0.1*w)")
    sigma = np.array([[0.9, 0.2], [-0.1, 1.1]])
    composed = compose_radial(fd, tr, sigma)
    region = Region.cube(-1.4, 1.4, dim=2, res=141)
    got = scan_zeros_2d(composed, region, params)
    inv = np.linalg.inv(sigma)
    expected = sorted(tuple(inv @ np.array(p)) for p in base)
    got_locs = sorted(p.location for p in got
                      if R2.contains(sigma @ np.array(p.location)))
    assert len(got_locs) == len(expected)
    for a, b in zip(got_locs, expected):
        assert a == pytest.approx(b, abs=1e-6)
