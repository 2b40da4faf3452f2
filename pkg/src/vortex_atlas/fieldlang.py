"""Expression language for complex scalar wave fields.

Grammar (precedence low to high): ``+ -`` | ``* /`` | unary ``-`` | ``^``
| atoms. ``i`` is the imaginary unit, ``sin``/``cos``/``exp`` are the only
functions, ``x y z t`` are coordinates and every other identifier is a
named real parameter. Exponents are non-negative integer literals or
parameter names that resolve to non-negative integers.

The same AST evaluates three ways: to complex numbers (scalars or NumPy
grids), and to :class:`~vortex_atlas.taylor.TruncatedSeries` over seeded
variables, which is how every jet in the package is produced.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import Optional, Union

import numpy as np

from .errors import (
    EvalError,
    FieldSyntaxError,
    NearSingularMatrix,
    NumericError,
    ShapeError,
)
from .taylor import MAX_ORDER, TruncatedSeries

VARIABLES = ("x", "y", "z", "t")
FUNCTIONS = ("sin", "cos", "exp")


# -- AST ------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Imag:
    pass


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Param:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class Add:
    left: object
    right: object


@dataclass(frozen=True)
class Sub:
    left: object
    right: object


@dataclass(frozen=True)
class Mul:
    left: object
    right: object


@dataclass(frozen=True)
class Div:
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: Union[int, str]  # literal or parameter name


@dataclass(frozen=True)
class Call:
    fn: str
    arg: object


# -- tokenizer / parser ---------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^()]))"
)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            off = len(text) - len(stripped)
            raise FieldSyntaxError(
                f"unexpected character {stripped[0]!r}", off,
                ("number", "identifier", "operator"))
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, variables):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0
        self.variables = variables

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, expected):
        kind, text, off = self.peek()
        shown = text if text else "end of input"
        raise FieldSyntaxError(f"unexpected {shown!r}", off, expected)

    def expect(self, op):
        kind, text, off = self.peek()
        if kind == "op" and text == op:
            return self.advance()
        self.fail((op,))

    def parse(self):
        expr = self.expr()
        if self.peek()[0] != "eof":
            self.fail(("end of input",))
        return expr

    def expr(self):
        node = self.term()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "+-":
                self.advance()
                rhs = self.term()
                node = Add(node, rhs) if text == "+" else Sub(node, rhs)
            else:
                return node

    def term(self):
        node = self.unary()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "*/":
                self.advance()
                rhs = self.unary()
                node = Mul(node, rhs) if text == "*" else Div(node, rhs)
            else:
                return node

    def unary(self):
        kind, text, _ = self.peek()
        if kind == "op" and text == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        kind, text, _ = self.peek()
        if kind == "op" and text == "^":
            self.advance()
            return Pow(base, self.exponent())
        return base

    def exponent(self):
        kind, text, off = self.peek()
        if kind == "num":
            if any(ch in text for ch in ".eE"):
                raise FieldSyntaxError(
                    f"exponent must be a non-negative integer, got {text!r}",
                    off, ("integer",))
            self.advance()
            return int(text)
        if kind == "ident" and text not in VARIABLES + FUNCTIONS + ("i",):
            self.advance()
            return text
        self.fail(("integer", "parameter name"))

    def atom(self):
        kind, text, off = self.peek()
        if kind == "num":
            self.advance()
            return Num(float(text))
        if kind == "ident":
            self.advance()
            if text == "i":
                return Imag()
            if text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(text, arg)
            if text in self.variables:
                return Var(text)
            if text in VARIABLES:
                raise FieldSyntaxError(
                    f"variable {text!r} not admissible here", off,
                    self.variables)
            return Param(text)
        if kind == "op" and text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        self.fail(("number", "identifier", "("))


def parse_field(text, variables=VARIABLES):
    """Parse an expression; raises FieldSyntaxError with byte offset."""
    return _Parser(text, variables).parse()


def parse_profile(text):
    """Parse a radial scaling profile, an expression in (u, w)."""
    return _Parser(text, ("u", "w")).parse()


# -- canonical printer ----------------------------------------------------

_PREC = {Add: 1, Sub: 1, Mul: 2, Div: 2, Neg: 3, Pow: 4}


def _num_text(value):
    if value == int(value) and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def to_text(expr):
    """Canonical rendering; parse(to_text(parse(s))) == parse(s)."""
    def render(node, parent_prec):
        if isinstance(node, Num):
            if node.value < 0:
                return render(Neg(Num(-node.value)), parent_prec)
            return _num_text(node.value)
        if isinstance(node, Imag):
            return "i"
        if isinstance(node, (Var, Param)):
            return node.name
        if isinstance(node, Call):
            return f"{node.fn}({render(node.arg, 0)})"
        prec = _PREC[type(node)]
        if isinstance(node, Neg):
            body = f"-{render(node.arg, prec)}"
        elif isinstance(node, Pow):
            body = f"{render(node.base, prec + 1)}^{node.exponent}"
        else:
            op = {Add: "+", Sub: "-", Mul: "*", Div: "/"}[type(node)]
            # left-associative: right child needs strictly higher precedence
            body = (f"{render(node.left, prec)} {op} "
                    f"{render(node.right, prec + 1)}")
        return f"({body})" if prec < parent_prec else body

    return render(expr, 0)


def walk(expr):
    yield expr
    for attr in ("arg", "left", "right", "base"):
        child = getattr(expr, attr, None)
        if child is not None and not isinstance(child, (int, str)):
            yield from walk(child)


def used_names(expr):
    """(variables, parameters) appearing in the expression."""
    variables, params = set(), set()
    for node in walk(expr):
        if isinstance(node, Var):
            variables.add(node.name)
        elif isinstance(node, Param):
            params.add(node.name)
        elif isinstance(node, Pow) and isinstance(node.exponent, str):
            params.add(node.exponent)
    return variables, params


# -- evaluation -----------------------------------------------------------

def _resolve_exponent(exponent, params):
    if isinstance(exponent, str):
        if exponent not in params:
            raise EvalError(f"undefined exponent parameter {exponent!r}")
        value = params[exponent]
    else:
        value = exponent
    n = int(round(float(value)))
    if abs(n - float(value)) > 1e-9 or n < 0:
        raise EvalError(f"exponent must be a non-negative integer, got {value}")
    return n


_NUMERIC_FN = {"sin": np.sin, "cos": np.cos, "exp": np.exp}


def eval_expr(expr, env, params):
    """Evaluate to a complex scalar or array, given variable values."""
    if isinstance(expr, Num):
        return expr.value
    if isinstance(expr, Imag):
        return 1j
    if isinstance(expr, Var):
        try:
            return env[expr.name]
        except KeyError:
            raise EvalError(f"variable {expr.name!r} has no value") from None
    if isinstance(expr, Param):
        try:
            return params[expr.name]
        except KeyError:
            raise EvalError(f"undefined parameter {expr.name!r}") from None
    if isinstance(expr, Neg):
        return -eval_expr(expr.arg, env, params)
    if isinstance(expr, Add):
        return eval_expr(expr.left, env, params) + eval_expr(expr.right, env, params)
    if isinstance(expr, Sub):
        return eval_expr(expr.left, env, params) - eval_expr(expr.right, env, params)
    if isinstance(expr, Mul):
        return eval_expr(expr.left, env, params) * eval_expr(expr.right, env, params)
    if isinstance(expr, Div):
        num = eval_expr(expr.left, env, params)
        den = eval_expr(expr.right, env, params)
        if np.min(np.abs(den)) == 0.0:
            raise EvalError("division by zero")
        return num / den
    if isinstance(expr, Pow):
        base = eval_expr(expr.base, env, params)
        return np.asarray(base) ** _resolve_exponent(expr.exponent, params) \
            if isinstance(base, np.ndarray) else base ** _resolve_exponent(expr.exponent, params)
    if isinstance(expr, Call):
        return _NUMERIC_FN[expr.fn](eval_expr(expr.arg, env, params))
    raise EvalError(f"cannot evaluate node {expr!r}")


def eval_expr_series(expr, env, params, nvars, order):
    """Evaluate to a TruncatedSeries, given seeded variable series."""
    const = lambda v: TruncatedSeries.constant(v, nvars, order)
    if isinstance(expr, Num):
        return const(expr.value)
    if isinstance(expr, Imag):
        return const(1j)
    if isinstance(expr, Var):
        try:
            return env[expr.name]
        except KeyError:
            raise EvalError(f"variable {expr.name!r} has no value") from None
    if isinstance(expr, Param):
        try:
            return const(params[expr.name])
        except KeyError:
            raise EvalError(f"undefined parameter {expr.name!r}") from None
    if isinstance(expr, Neg):
        return -eval_expr_series(expr.arg, env, params, nvars, order)
    if isinstance(expr, (Add, Sub, Mul, Div)):
        lhs = eval_expr_series(expr.left, env, params, nvars, order)
        rhs = eval_expr_series(expr.right, env, params, nvars, order)
        if isinstance(expr, Add):
            return lhs + rhs
        if isinstance(expr, Sub):
            return lhs - rhs
        if isinstance(expr, Mul):
            return lhs * rhs
        return lhs / rhs
    if isinstance(expr, Pow):
        base = eval_expr_series(expr.base, env, params, nvars, order)
        return base.pow(_resolve_exponent(expr.exponent, params))
    if isinstance(expr, Call):
        arg = eval_expr_series(expr.arg, env, params, nvars, order)
        return getattr(arg, expr.fn)()
    raise EvalError(f"cannot evaluate node {expr!r}")


# -- radial transforms ----------------------------------------------------

@dataclass(frozen=True)
class RadialTransform:
    """Value-plane diffeomorphism U+iW = rho(u,w) * M (u,w) fixing 0 and
    sending radial lines to radial lines. `profile` is an expression in
    (u, w); None means rho == 1."""

    linear: tuple  # ((a, b), (c, d))
    profile: Optional[object] = None

    def __post_init__(self):
        m = np.asarray(self.linear, dtype=float)
        if m.shape != (2, 2):
            raise NearSingularMatrix("radial linear part must be 2x2")
        if abs(np.linalg.det(m)) <= 1e-9:
            raise NearSingularMatrix(
                f"radial linear part has |det| = {abs(np.linalg.det(m)):.3g}")
        if self.profile is not None:
            rho0 = eval_expr(self.profile, {"u": 0.0, "w": 0.0}, {})
            if not np.isrealobj(np.asarray(rho0)) and abs(np.imag(rho0)) > 1e-12:
                raise EvalError("scaling profile must be real-valued")
            if np.real(rho0) < 1e-6:
                raise EvalError(
                    f"scaling profile at the origin is {np.real(rho0):.3g} < 1e-6")

    @classmethod
    def identity(cls):
        return cls(((1.0, 0.0), (0.0, 1.0)))

    @classmethod
    def from_text(cls, linear, profile_text=None):
        prof = parse_profile(profile_text) if profile_text else None
        return cls(tuple(tuple(float(v) for v in row) for row in linear), prof)

    def matrix(self):
        return np.asarray(self.linear, dtype=float)


@dataclass(frozen=True)
class RadialWrap:
    """Composition data for tau . psi . sigma."""

    source_linear: tuple  # dim x dim matrix rows
    value_map: RadialTransform

    def source_matrix(self):
        return np.asarray(self.source_linear, dtype=float)


# -- field definitions ----------------------------------------------------

@dataclass(frozen=True)
class FieldDef:
    """A named complex field: expression, dimension and parameter defaults."""

    name: str
    dim: int
    time_dependent: bool
    expr: object
    params: dict = field(default_factory=dict)
    provenance: str = ""
    wrap: Optional[RadialWrap] = None
    plane_waves: Optional[object] = None
    tags: frozenset = frozenset()

    def __post_init__(self):
        if self.dim not in (2, 3):
            raise ShapeError(f"dim must be 2 or 3, got {self.dim}")
        variables, params = used_names(self.expr)
        allowed = set(VARIABLES[: self.dim])
        if self.time_dependent:
            allowed.add("t")
        if not variables <= allowed:
            raise EvalError(
                f"field {self.name!r} uses variables {sorted(variables - allowed)} "
                f"not admissible for dim={self.dim}, "
                f"time_dependent={self.time_dependent}")
        if not params <= set(self.params):
            raise EvalError(
                f"field {self.name!r} uses undeclared parameters "
                f"{sorted(params - set(self.params))}")

    def spatial_vars(self):
        return VARIABLES[: self.dim]


def field_from_text(name, text, dim=2, time_dependent=False, params=None,
                    provenance="", tags=()):
    return FieldDef(name, dim, time_dependent, parse_field(text),
                    dict(params or {}), provenance, tags=frozenset(tags))


def _merge_params(fd, overrides):
    merged = dict(fd.params)
    if overrides:
        merged.update(overrides)
    return merged


def _coordinate_env(fd, point):
    """Variable values for a point; time comes from the trailing component
    or from the parameter `t` (default 0) when the field is a wave."""
    point = tuple(point)
    if fd.time_dependent and len(point) == fd.dim + 1:
        env = dict(zip(fd.spatial_vars(), point[: fd.dim]))
        env["t"] = point[fd.dim]
        return env, True
    if len(point) != fd.dim:
        raise EvalError(
            f"point arity {len(point)} does not match dim {fd.dim}"
            + (" (+1 for time)" if fd.time_dependent else ""))
    return dict(zip(fd.spatial_vars(), point)), False


def _apply_source_linear(env, matrix, names):
    cols = [env[n] for n in names]
    out = {}
    for r, name in enumerate(names):
        acc = matrix[r, 0] * cols[0]
        for c in range(1, len(names)):
            acc = acc + matrix[r, c] * cols[c]
        out[name] = acc
    for key in env:
        if key not in out:
            out[key] = env[key]
    return out


def eval_field(fd, point, params=None):
    """Complex value of the field at a point (components may be arrays)."""
    merged = _merge_params(fd, params)
    env, has_time = _coordinate_env(fd, point)
    if fd.time_dependent and not has_time:
        env["t"] = merged.get("t", 0.0)
    if fd.wrap is not None:
        env = _apply_source_linear(env, fd.wrap.source_matrix(),
                                   fd.spatial_vars())
    value = eval_expr(fd.expr, env, merged)
    if fd.wrap is not None:
        tr = fd.wrap.value_map
        u, w = np.real(value), np.imag(value)
        rho = 1.0 if tr.profile is None else np.real(
            eval_expr(tr.profile, {"u": u, "w": w}, {}))
        (a, b), (c, d) = tr.linear
        value = rho * (a * u + b * w) + 1j * (rho * (c * u + d * w))
    if not np.all(np.isfinite(np.asarray(value))):
        raise NumericError(f"field {fd.name!r} evaluated to a non-finite value")
    return value


def eval_field_jet(fd, point, params=None, order=6, with_time=False):
    """Truncated Taylor expansion of the field about a point.

    Seeds each spatial coordinate as a series variable (components may be
    arrays, producing a batched jet). With ``with_time=True`` the time
    coordinate of a wave is seeded as the last series variable.
    """
    if order > MAX_ORDER:
        raise ShapeError(f"order {order} exceeds maximum {MAX_ORDER}")
    merged = _merge_params(fd, params)
    env_vals, has_time = _coordinate_env(fd, point)
    nvars = fd.dim + (1 if with_time else 0)
    if with_time and not fd.time_dependent:
        raise EvalError("with_time requires a time-dependent field")
    env = {}
    for idx, name in enumerate(fd.spatial_vars()):
        env[name] = TruncatedSeries.variable(idx, env_vals[name], nvars, order)
    if fd.time_dependent:
        tval = env_vals.get("t", merged.get("t", 0.0))
        if with_time:
            env["t"] = TruncatedSeries.variable(fd.dim, tval, nvars, order)
        else:
            env["t"] = TruncatedSeries.constant(tval, nvars, order)
    if fd.wrap is not None:
        space = {n: env[n] for n in fd.spatial_vars()}
        space = _apply_source_linear(space, fd.wrap.source_matrix(),
                                     fd.spatial_vars())
        env.update(space)
    value = eval_expr_series(fd.expr, env, merged, nvars, order)
    if fd.wrap is not None:
        tr = fd.wrap.value_map
        u, w = value.real_part(), value.imag_part()
        if tr.profile is None:
            rho = TruncatedSeries.constant(
                np.ones(() if u.batch_size is None else (u.batch_size,)),
                nvars, order)
        else:
            rho = eval_expr_series(tr.profile, {"u": u, "w": w}, {},
                                   nvars, order).real_part()
        (a, b), (c, d) = tr.linear
        value = rho * (a * u + b * w) + (rho * (c * u + d * w)) * 1j
    return value


def compose_radial(fd, transform, source):
    """Field tau(psi(sigma(x))) for a radial transform tau and linear sigma."""
    matrix = np.asarray(source, dtype=float)
    if matrix.shape != (fd.dim, fd.dim):
        raise NearSingularMatrix(
            f"source matrix shape {matrix.shape} does not match dim {fd.dim}")
    if abs(np.linalg.det(matrix)) <= 1e-9:
        raise NearSingularMatrix(
            f"source matrix has |det| = {abs(np.linalg.det(matrix)):.3g}")
    if fd.wrap is not None:
        raise EvalError("field is already radially composed")
    wrap = RadialWrap(tuple(tuple(float(v) for v in row) for row in matrix),
                      transform)
    return replace(fd, name=fd.name + "~radial", wrap=wrap)


# -- field files ----------------------------------------------------------

def format_field_file(fd):
    """Single-line definition: name; dim; time_flag; params; expression."""
    params = ",".join(f"{k}={v!r}" for k, v in sorted(fd.params.items())) or "-"
    return (f"{fd.name}; {fd.dim}; {int(fd.time_dependent)}; {params}; "
            f"{to_text(fd.expr)}")


def parse_field_file(text):
    parts = [p.strip() for p in text.strip().split(";")]
    if len(parts) != 5:
        raise EvalError(
            "field file needs 'name; dim; time_flag; params; expression'")
    name, dim, flag, params_text, expr_text = parts
    params = {}
    if params_text not in ("", "-"):
        for item in params_text.split(","):
            key, _, val = item.partition("=")
            params[key.strip()] = float(val)
    return field_from_text(name, expr_text, dim=int(dim),
                           time_dependent=bool(int(flag)), params=params)


def load_field_file(path):
    with open(path, encoding="utf-8") as fh:
        return parse_field_file(fh.read())


def save_field_file(fd, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_field_file(fd) + "\n")
