"""Parser, printer, evaluation and the field catalog."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vortex_atlas.catalog import catalog_get, catalog_names
from vortex_atlas.errors import (
    EvalError,
    FieldSyntaxError,
    NearSingularMatrix,
    UnknownField,
)
from vortex_atlas.fieldlang import (
    Add,
    Call,
    Mul,
    Pow,
    RadialTransform,
    Sub,
    compose_radial,
    eval_field,
    eval_field_jet,
    field_from_text,
    format_field_file,
    parse_field,
    parse_field_file,
    to_text,
)
from tests.conftest import fd_partial


def test_parse_structure():
    ast = parse_field("x^2 - y^2 + i*y")
    assert isinstance(ast, Add)
    assert isinstance(ast.left, Sub)
    assert isinstance(ast.left.left, Pow) and ast.left.left.exponent == 2
    assert isinstance(ast.right, Mul)


def test_parse_function_nodes():
    ast = parse_field("cos(y) - cos(x) + i*sin(y)")
    calls = [n for n in _walk(ast) if isinstance(n, Call)]
    assert len(calls) == 3
    assert {c.fn for c in calls} == {"cos", "sin"}


def _walk(node):
    yield node
    for attr in ("left", "right", "arg", "base"):
        child = getattr(node, attr, None)
        if child is not None and not isinstance(child, (int, str)):
            yield from _walk(child)


def test_negative_exponent_rejected():
    with pytest.raises(FieldSyntaxError) as exc:
        parse_field("x^(-1)")
    assert exc.value.offset == 2
    assert exc.value.expected


def test_syntax_error_offset():
    with pytest.raises(FieldSyntaxError) as exc:
        parse_field("x + * y")
    assert exc.value.offset == 4


def test_unknown_character():
    with pytest.raises(FieldSyntaxError):
        parse_field("x + $")


def test_eval_simple():
    fd = field_from_text("t", "x^2 - y^2 + i*y")
    assert eval_field(fd, (1.0, 2.0)) == pytest.approx(-3.0 + 2.0j)


def test_eval_catalog_zero():
    fd = catalog_get("H2.helmholtz-hyperbolic")
    assert abs(eval_field(fd, (0.0, 0.0))) == 0.0


def test_eval_cusp_family_zero():
    fd = catalog_get("H2.cusp-family")
    assert eval_field(fd, (0.5, -0.25), {"a": 0.25}) == pytest.approx(0.0)
    assert eval_field(fd, (-0.5, -0.25), {"a": 0.25}) == pytest.approx(0.0)


def test_eval_division_by_zero():
    fd = field_from_text("t", "x / y")
    with pytest.raises(EvalError):
        eval_field(fd, (1.0, 0.0))


def test_jet_linear():
    fd = catalog_get("H2.regular")
    s = eval_field_jet(fd, (0.0, 0.0), order=1)
    assert s.coeff((1, 0)) == 1.0
    assert s.coeff((0, 1)) == 1.0j


def test_jet_helmholtz_hyperbolic():
    fd = catalog_get("H2.helmholtz-hyperbolic")
    s = eval_field_jet(fd, (0.0, 0.0), order=3)
    assert s.deriv((0, 0)) == pytest.approx(0.0)
    assert s.deriv((1, 0)) == pytest.approx(0.0)
    assert s.deriv((0, 1)) == pytest.approx(1.0j)
    assert s.deriv((2, 0)) == pytest.approx(1.0)
    assert s.deriv((0, 2)) == pytest.approx(-1.0)
    assert s.deriv((0, 3)) == pytest.approx(-1.0j)


def test_jet_polynomial_is_exact():
    fd = field_from_text("t", "x^3 + x*y + i*y")
    s = eval_field_jet(fd, (0.0, 0.0), order=3)
    assert s.coeff((0, 1)) == 1.0j
    assert s.coeff((1, 1)) == 1.0
    assert s.coeff((3, 0)) == 1.0
    assert abs(s.coeffs).sum() == pytest.approx(3.0)


def test_jet_constant_term_matches_eval():
    for name in ("H2.helmholtz-cusp", "H3.helmholtz-DHt"):
        fd = catalog_get(name)
        pt = (0.21, -0.4) if fd.dim == 2 else (0.21, -0.4, 0.13)
        s = eval_field_jet(fd, pt, order=2)
        v = eval_field(fd, pt)
        assert abs(complex(s.constant_term) - v) <= 1e-14 * (1 + abs(v))


def test_catalog_size_and_lookup():
    names = catalog_names()
    assert len(names) >= 18
    assert to_text(catalog_get("H2.regular").expr) == "x + i * y"
    fd = catalog_get("H3.DH")
    assert to_text(fd.expr) == "x^2 + y^2 - z^2 + i * z"
    with pytest.raises(UnknownField):
        catalog_get("nope")


def test_catalog_entries_evaluate():
    for name in catalog_names():
        fd = catalog_get(name)
        pt = (0.3, 0.1) if fd.dim == 2 else (0.3, 0.1, -0.2)
        value = eval_field(fd, pt)
        assert np.isfinite(value)


def test_roundtrip_fixed_cases():
    for text in ("x^2 - y^2 + i*y", "cos(y)-cos(x)+i*sin(y)",
                 "-x^3 + x*(y - 2)", "x/(1 + y^2)", "2e-3*x"):
        once = to_text(parse_field(text))
        again = to_text(parse_field(once))
        assert once == again


_ident = st.sampled_from(["x", "y", "a", "b"])


def _expr_strategy():
    atoms = st.one_of(
        st.floats(min_value=0.0, max_value=9.0, allow_nan=False).map(
            lambda v: f"{v:.3g}"),
        _ident,
        st.just("i"),
    )
    def combine(children):
        l, r = children
        return st.sampled_from(
            [f"({l} + {r})", f"({l} - {r})", f"({l} * {r})",
             f"-({l})", f"sin({l})", f"cos({l})", f"exp({r})",
             f"({l})^2"])
    return st.recursive(atoms, lambda s: st.tuples(s, s).flatmap(combine),
                        max_leaves=12)


@settings(max_examples=80, deadline=None)
@given(_expr_strategy())
def test_roundtrip_property(text):
    ast = parse_field(text)
    printed = to_text(ast)
    assert to_text(parse_field(printed)) == printed


# -- radial composition ---------------------------------------------------------

def test_compose_identity():
    fd = catalog_get("H2.hyperbolic")
    composed = compose_radial(fd, RadialTransform.identity(), np.eye(2))
    grid = np.linspace(-1, 1, 7)
    for x in grid:
        for y in grid:
            assert abs(eval_field(composed, (x, y))
                       - eval_field(fd, (x, y))) < 1e-14


def test_compose_constant_profile_doubles():
    fd = catalog_get("H2.regular")
    tr = RadialTransform.from_text(((1, 0), (0, 1)), "2")
    composed = compose_radial(fd, tr, np.eye(2))
    assert eval_field(composed, (0.3, 0.4)) == pytest.approx(0.6 + 0.8j)


def test_compose_rotation_keeps_class():
    from vortex_atlas.classify import classify_at

    fd = catalog_get("H2.hyperbolic")
    tr = RadialTransform.from_text(((1, 0), (0, 1)), "exp(u)")
    rot = 0.3
    sigma = np.array([[np.cos(rot), -np.sin(rot)],
                      [np.sin(rot), np.cos(rot)]])
    composed = compose_radial(fd, tr, sigma)
    assert classify_at(composed, (0.0, 0.0)).sclass.kind == "Hyperbolic"


def test_compose_rejects_singular():
    fd = catalog_get("H2.regular")
    with pytest.raises(NearSingularMatrix):
        compose_radial(fd, RadialTransform.identity(),
                       np.array([[1.0, 1.0], [1.0, 1.0]]))
    with pytest.raises(NearSingularMatrix):
        RadialTransform(((1.0, 2.0), (2.0, 4.0)))


def test_field_file_roundtrip(tmp_path):
    fd = catalog_get("H2.cusp-family")
    line = format_field_file(fd)
    back = parse_field_file(line)
    assert back.name == fd.name
    assert back.dim == fd.dim
    assert back.params == fd.params
    for pt in ((0.1, 0.2), (-0.4, 0.9)):
        assert eval_field(back, pt, {"a": 0.3}) == pytest.approx(
            eval_field(fd, pt, {"a": 0.3}))


# -- finite-difference oracle for jets ------------------------------------------

@pytest.mark.parametrize("name", ["H2.hyperbolic", "H2.helmholtz-hyperbolic",
                                  "H2.helmholtz-cusp", "H3.helmholtz-cusp"])
def test_jet_matches_finite_differences(name):
    fd = catalog_get(name)
    pt = (0.17, -0.23) if fd.dim == 2 else (0.17, -0.23, 0.31)
    s = eval_field_jet(fd, pt, order=3)
    from vortex_atlas.taylor import exponent_list

    for alpha in exponent_list(fd.dim, 3):
        approx = fd_partial(fd, pt, alpha)
        assert abs(complex(s.deriv(alpha)) - approx) < 1e-6
