"""Singularity classification: worked examples, invariance, oracle."""

import numpy as np
import pytest

from vortex_atlas.catalog import catalog_get
from vortex_atlas.classify import (
    Jet2,
    ToleranceSet,
    classify_at,
    classify_jet_2d,
    classify_jet_3d,
    classify_phase_critical,
    contact_order,
    jet_from_series,
)
from vortex_atlas.errors import (
    AllOrdersVanish,
    InsufficientOrder,
    NotCritical,
    NotOnDislocation,
    OnDislocation,
)
from vortex_atlas.fieldlang import (
    RadialTransform,
    compose_radial,
    eval_field_jet,
    field_from_text,
)

TOL = ToleranceSet()


def _jet(name_or_text, point=(0.0, 0.0), params=None, order=6):
    if "." in name_or_text and " " not in name_or_text:
        fd = catalog_get(name_or_text)
    else:
        dim = 3 if len(point) == 3 else 2
        fd = field_from_text("inline", name_or_text, dim=dim)
    s = eval_field_jet(fd, point, params, order=order)
    return jet_from_series(s, basepoint=point)


# -- jet extraction ---------------------------------------------------------

def test_jet_from_series_coefficients():
    j = _jet("H2.helmholtz-hyperbolic")
    assert j.a == pytest.approx(0.0)
    assert j.b == pytest.approx(0.0)
    assert j.c == pytest.approx(1.0j)
    assert j.e == pytest.approx(1.0)
    assert j.f == pytest.approx(0.0)
    assert j.g == pytest.approx(-1.0)


def test_jet_from_series_linear():
    j = _jet("H2.regular")
    assert j.b == 1.0 and j.c == 1.0j
    assert j.e == j.f == j.g == 0.0


def test_jet_requires_order_three():
    fd = catalog_get("H2.regular")
    with pytest.raises(InsufficientOrder):
        jet_from_series(eval_field_jet(fd, (0.0, 0.0), order=2))


# -- 2-D classes -------------------------------------------------------------

def test_classify_regular():
    assert classify_jet_2d(_jet("H2.regular"), TOL).sclass.kind == "Regular"


def test_classify_hyperbolic_diagnostics():
    r = classify_jet_2d(_jet("H2.hyperbolic"), TOL)
    assert r.sclass.kind == "Hyperbolic"
    assert abs(r.kernel[0]) == pytest.approx(1.0)
    assert r.vlambda == pytest.approx(2.0)
    assert abs(r.curvature_normal) == pytest.approx(2.0)
    assert abs(r.opening_normal) == pytest.approx(2.0)
    assert r.curvature_product == pytest.approx(-4.0)


def test_classify_elliptic():
    r = classify_jet_2d(_jet("H2.elliptic"), TOL)
    assert r.sclass.kind == "Elliptic"
    assert r.curvature_product == pytest.approx(4.0)


def test_classify_cusp_diagnostics():
    r = classify_jet_2d(_jet("H2.cusp-normal"), TOL)
    assert r.sclass.kind == "Cusp"
    assert r.vlambda == pytest.approx(0.0)
    assert r.vvlambda == pytest.approx(6.0)
    assert tuple(np.abs(r.dlambda)) == pytest.approx((0.0, 1.0))
    assert r.cusp_orders == (2, 3)


def test_classify_helmholtz_hyperbolic():
    r = classify_jet_2d(_jet("H2.helmholtz-hyperbolic"), TOL)
    assert r.sclass.kind == "Hyperbolic"


def test_classify_degenerate_fold_m3():
    r = classify_jet_2d(_jet("x^2 - y^3 + i*y"), TOL)
    assert r.sclass.label() == "DegenerateFold(3,-)"


def test_classify_not_on_dislocation():
    with pytest.raises(NotOnDislocation):
        classify_jet_2d(_jet("H2.regular", (0.5, 0.5)), TOL)


def test_classify_corank2():
    r = classify_jet_2d(_jet("x^2 + i*y^2"), TOL)
    assert r.sclass.kind == "Degenerate"
    assert "corank" in r.sclass.reason


def test_classify_flat_discriminant():
    # x^2 + iy has a straight-line discriminant: no transverse contact
    r = classify_jet_2d(_jet("x^2 + i*y"), TOL)
    assert r.sclass.kind == "Degenerate"
    assert "flat" in r.sclass.reason


# -- contact orders ------------------------------------------------------------

def test_contact_order_quadratic():
    assert contact_order(_jet("H2.hyperbolic")) == (2, -1)
    assert contact_order(_jet("H2.elliptic")) == (2, 1)


def test_contact_order_quartic():
    assert contact_order(_jet("x^2 + y^4 + i*y")) == (4, 1)
    assert contact_order(_jet("x^2 - y^4 + i*y")) == (4, -1)


def test_contact_order_all_vanish():
    with pytest.raises(AllOrdersVanish):
        contact_order(_jet("x^2 + i*y"))


@pytest.mark.parametrize("m", [3, 4, 5])
@pytest.mark.parametrize("sign", [1.0, -1.0])
def test_fold_family_labels(m, sign):
    j = _jet("H2.foldm", params={"m": float(m), "sign": sign})
    r = classify_jet_2d(j, TOL)
    assert r.sclass.kind == "DegenerateFold"
    assert r.sclass.order == m
    assert r.sclass.sign == (1 if sign > 0 else -1)


# -- 3-D classes ----------------------------------------------------------------

def test_classify_3d_normal_forms():
    assert classify_jet_3d(_jet("H3.DH", (0, 0, 0)), TOL).sclass.kind == \
        "DefiniteHyperbolic"
    assert classify_jet_3d(_jet("H3.DE", (0, 0, 0)), TOL).sclass.kind == \
        "DefiniteElliptic"
    assert classify_jet_3d(_jet("H3.I", (0, 0, 0)), TOL).sclass.kind == \
        "Indefinite"
    assert classify_jet_3d(_jet("H3.cusp", (0, 0, 0)), TOL).sclass.kind == \
        "SpatialCusp"


def test_classify_3d_regular():
    r = classify_jet_3d(_jet("x + i*y", (0, 0, 0)), TOL)
    assert r.sclass.kind == "Regular"


def test_classify_3d_definite_diagnostics():
    r = classify_jet_3d(_jet("H3.DH", (0, 0, 0)), TOL)
    assert r.curvature_product == pytest.approx(-4.0)
    assert sorted(np.abs(r.q_eigenvalues)) == pytest.approx([2.0, 2.0])
    r = classify_jet_3d(_jet("H3.DE", (0, 0, 0)), TOL)
    assert r.curvature_product == pytest.approx(4.0)


def test_classify_3d_spatial_cusp_orders():
    r = classify_jet_3d(_jet("H3.cusp", (0, 0, 0)), TOL)
    assert r.cusp_orders == (2, 3)
    r = classify_jet_3d(_jet("H3.helmholtz-cusp", (0, 0, 0)), TOL)
    assert r.sclass.kind == "SpatialCusp"
    assert r.cusp_orders == (2, 3)


# -- phase critical points --------------------------------------------------------

def test_phase_critical_extremum():
    fd = field_from_text("p", "exp(i*(x^2 + y^2))")
    assert classify_phase_critical(fd, (0.0, 0.0)) == "Extremum"


def test_phase_critical_saddle():
    fd = field_from_text("p", "exp(i*(x^2 - y^2))")
    assert classify_phase_critical(fd, (0.0, 0.0)) == "Saddle"


def test_phase_critical_degenerate():
    fd = field_from_text("p", "exp(i*(x^3 + y^2))")
    assert classify_phase_critical(fd, (0.0, 0.0)) == "DegenerateCritical"


def test_phase_critical_guards():
    fd = field_from_text("p", "exp(i*(x^2 + y^2))")
    with pytest.raises(NotCritical):
        classify_phase_critical(fd, (0.4, 0.0))
    with pytest.raises(OnDislocation):
        classify_phase_critical(catalog_get("H2.regular"), (0.0, 0.0))


# -- invariance properties ---------------------------------------------------------

_NORMAL_FORMS = [
    ("H2.regular", None, "Regular"),
    ("H2.hyperbolic", None, "Hyperbolic"),
    ("H2.elliptic", None, "Elliptic"),
    ("H2.cusp-normal", None, "Cusp"),
    ("H2.foldm", {"m": 4.0, "sign": 1.0}, "DegenerateFold"),
]


def _random_radial(rng):
    while True:
        linear = rng.uniform(-1.0, 1.0, (2, 2))
        if abs(np.linalg.det(linear)) > 0.1:
            break
    alpha, beta = rng.uniform(-0.5, 0.5, 2)
    profile = f"exp({alpha:.6f}*u + {beta:.6f}*w)"
    return RadialTransform.from_text(linear.tolist(), profile)


def _random_source(rng, dim=2):
    while True:
        sigma = rng.uniform(-1.0, 1.0, (dim, dim))
        if abs(np.linalg.det(sigma)) > 0.1:
            return sigma


@pytest.mark.parametrize("name,params,kind", _NORMAL_FORMS)
def test_radial_invariance_sample(name, params, kind, rng):
    fd = catalog_get(name)
    base = classify_at(fd, (0.0, 0.0), params)
    assert base.sclass.kind == kind
    for _ in range(8):
        composed = compose_radial(fd, _random_radial(rng), _random_source(rng))
        got = classify_at(composed, (0.0, 0.0), params)
        assert got.sclass.kind == kind
        if kind == "DegenerateFold":
            assert got.sclass.order == base.sclass.order


def test_scale_robustness():
    for name, params, kind in _NORMAL_FORMS:
        fd = catalog_get(name)
        base = classify_at(fd, (0.0, 0.0), params).sclass
        for c in (1e-3, 1e3):
            scaled = field_from_text(
                "scaled", f"{c!r}*(" +
                __import__("vortex_atlas.fieldlang", fromlist=["to_text"])
                .to_text(fd.expr) + ")",
                params=dict(fd.params))
            got = classify_at(scaled, (0.0, 0.0), params).sclass
            assert got == base, (name, c)


def test_fold_dichotomy_exhaustive(rng):
    # on the fold branch with clear curvature the answer is H or E, never both
    for _ in range(50):
        av = rng.uniform(0, 2 * np.pi)
        v = np.array([np.cos(av), np.sin(av)])
        m = np.array([-v[1], v[0]])
        u = rng.standard_normal(2)
        u /= np.linalg.norm(u)
        D = rng.uniform(0.5, 2.0) * np.outer(u, m)
        e, f, g = (complex(*rng.standard_normal(2)) for _ in range(3))
        j = Jet2((0.0, 0.0), 0j, complex(D[0, 0], D[1, 0]),
                 complex(D[0, 1], D[1, 1]), e, f, g, 0j, 0j, 0j, 0j)
        r = classify_jet_2d(j, TOL)
        if r.curvature_product is not None and \
                abs(r.curvature_product) > TOL.curv * r.scale**2:
            assert r.sclass.kind in ("Hyperbolic", "Elliptic")


# -- brute-force convexity oracle ---------------------------------------------------

def oracle_is_convex(j, image_dir, radius=1e-2, n_ang=48, n_rad=8):
    """Sample the image cloud on a disk and fit the quadratic form of the
    component normal to the discriminant tangent; convex iff definite.
    Pure sampling and regression: independent of the classifier."""
    that = complex(image_dir[0], image_dir[1])
    nhat = 1j * that
    rows, rhs = [], []
    for ia in range(n_ang):
        a = 2 * np.pi * ia / n_ang
        for ir in range(1, n_rad + 1):
            rr = radius * ir / n_rad
            p = (rr * np.cos(a), rr * np.sin(a))
            z = (j.a + j.b * p[0] + j.c * p[1] + 0.5 * j.e * p[0] ** 2
                 + j.f * p[0] * p[1] + 0.5 * j.g * p[1] ** 2)
            rows.append((p[0] * p[0], p[0] * p[1], p[1] * p[1]))
            rhs.append((z * np.conj(nhat)).real)
    coef, *_ = np.linalg.lstsq(np.asarray(rows), np.asarray(rhs), rcond=None)
    q = np.array([[2 * coef[0], coef[1]], [coef[1], 2 * coef[2]]])
    eigs = np.linalg.eigvalsh(q)
    return eigs[0] * eigs[1] > 0


def test_convexity_oracle_agreement(rng):
    agree = total = 0
    for _ in range(100):
        av = rng.uniform(0, 2 * np.pi)
        v = np.array([np.cos(av), np.sin(av)])
        m = np.array([-v[1], v[0]])
        au = rng.uniform(0, 2 * np.pi)
        u = np.array([np.cos(au), np.sin(au)])
        D = rng.uniform(0.5, 2.0) * np.outer(u, m)
        e, f, g = (complex(*rng.standard_normal(2)) for _ in range(3))
        j = Jet2((0.0, 0.0), 0j, complex(D[0, 0], D[1, 0]),
                 complex(D[0, 1], D[1, 1]), e, f, g, 0j, 0j, 0j, 0j)
        r = classify_jet_2d(j, TOL)
        if r.sclass.kind not in ("Hyperbolic", "Elliptic"):
            continue
        if abs(r.curvature_product) <= 10 * TOL.curv * r.scale**2:
            continue
        total += 1
        if oracle_is_convex(j, u) == (r.sclass.kind == "Elliptic"):
            agree += 1
    assert total > 50
    assert agree == total


def test_report_json_keys():
    r = classify_jet_2d(_jet("H2.hyperbolic"), TOL)
    doc = r.to_json()
    for key in ("class", "kernel", "vlambda", "curvature_product",
                "contact_order", "tolerances"):
        assert key in doc
    assert doc["class"] == "Hyperbolic"
    assert set(doc["tolerances"]) == {"rank", "fold", "curv", "grad",
                                      "hess", "zero"}
