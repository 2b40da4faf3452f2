"""Helmholtz and wave-equation machinery.

Residual checks evaluate second derivatives from order-2 jets batched over
the verification grid (one coefficient column per grid point). Two
constructors produce solutions: a local series built from boundary data by
the two-step recursion the equation imposes on derivative rows, and exact
global superpositions of plane waves used for genericity sampling. The
Hessian-pencil test decides whether any real combination of Re/Im Hessian
is definite; at zeros of a Helmholtz field both are traceless, so it never
is, which is the computable form of the elliptic obstruction.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .classify import Jet2, Jet3, ToleranceSet
from .dislocation import Region
from .errors import (
    BadParameter,
    DimMismatch,
    NotOnDislocation,
    NotTimeDependent,
    ShapeError,
)
from .fieldlang import (
    Add,
    Call,
    Div,
    FieldDef,
    Imag,
    Mul,
    Neg,
    Num,
    Param,
    Pow,
    Sub,
    Var,
    eval_field_jet,
)
from .taylor import TruncatedSeries, exponent_list

DEFAULT_GRID_RES = 101
# batched-jet columns per block; small enough that the pair-product
# workspace stays cache-resident
_CHUNK = 8192


@dataclass(frozen=True)
class CauchyData:
    """Boundary rows determining a planar Helmholtz series: entry i of
    psi0/psi1 is the i-th x-derivative of psi resp. psi_y on the line
    y = y0, taken at x0."""

    x0: float
    psi0: tuple
    psi1: tuple
    k: float = 1.0

    def row(self, j, order):
        src = self.psi0 if j == 0 else self.psi1
        return [complex(src[i]) if i < len(src) else 0.0
                for i in range(order + 1)]


@dataclass
class ResidualReport:
    sup_abs: float
    region: Region
    k: float | None
    c: float | None
    argmax: tuple
    n_points: int

    def to_json(self):
        return {"residual": self.sup_abs,
                "region": self.region.to_json(),
                "k": self.k, "c": self.c,
                "argmax": [float(v) for v in self.argmax],
                "n_points": self.n_points}


@dataclass(frozen=True)
class PlaneWaveSum:
    """Exact Helmholtz solution: sum of amplitude * exp(i k <d, x>)."""

    terms: tuple  # ((complex amplitude, unit direction tuple), ...)
    k: float


# -- residuals ---------------------------------------------------------------

def _grid_columns(region):
    mesh = np.meshgrid(*region.axes(), indexing="ij")
    return [m.ravel() for m in mesh]


def _second_deriv_indices(nvars, spatial):
    out = []
    for ax in range(spatial):
        e = [0] * nvars
        e[ax] = 2
        out.append(tuple(e))
    return out


def helmholtz_residual(fd, region, k=1.0, params=None):
    """Sup over the grid of |laplacian(psi) + k^2 psi|."""
    if region.dim != fd.dim:
        raise ShapeError("region dimension does not match the field")
    cols = _grid_columns(region)
    n = len(cols[0])
    lap_idx = _second_deriv_indices(fd.dim, fd.dim)
    sup, arg = -1.0, None
    for start in range(0, n, _CHUNK):
        chunk = tuple(c[start:start + _CHUNK] for c in cols)
        jet = eval_field_jet(fd, chunk, params, order=2)
        res = k * k * jet.constant_term
        for e in lap_idx:
            res = res + jet.deriv(e)
        mags = np.abs(res)
        i = int(np.argmax(mags))
        if mags[i] > sup:
            sup = float(mags[i])
            arg = tuple(float(c[i]) for c in chunk)
    return ResidualReport(sup, region, k, None, arg, n)


def wave_residual(fd, region, times, c=1.0, params=None):
    """Sup over grid x times of |psi_tt - c^2 laplacian(psi)|, with the
    time coordinate seeded as a series variable."""
    if not fd.time_dependent:
        raise NotTimeDependent(f"{fd.name!r} has no time dependence")
    if region.dim != fd.dim:
        raise ShapeError("region dimension does not match the field")
    cols = _grid_columns(region)
    n = len(cols[0])
    nvars = fd.dim + 1
    lap_idx = _second_deriv_indices(nvars, fd.dim)
    tt = tuple([0] * fd.dim + [2])
    sup, arg = -1.0, None
    for t0 in times:
        for start in range(0, n, _CHUNK):
            chunk = tuple(c0[start:start + _CHUNK] for c0 in cols)
            tcol = np.full(len(chunk[0]), float(t0))
            jet = eval_field_jet(fd, chunk + (tcol,), params, order=2,
                                 with_time=True)
            res = jet.deriv(tt)
            for e in lap_idx:
                res = res - c * c * jet.deriv(e)
            mags = np.abs(res)
            i = int(np.argmax(mags))
            if mags[i] > sup:
                sup = float(mags[i])
                arg = tuple(float(col[i]) for col in chunk) + (float(t0),)
    return ResidualReport(sup, region, None, c, arg, n * len(times))


# -- constructors --------------------------------------------------------------

def helmholtz_series_from_cauchy(data, order=6):
    """Planar series from boundary rows via c[i, j+2] = -c[i+2, j] - k^2 c[i, j].

    Rows hold derivative values (not factorial-weighted Taylor
    coefficients); the returned series converts to the Taylor convention.
    The construction satisfies the jet relations of the equation exactly.
    """
    if order > 10:
        raise ShapeError("order must be at most 10")
    k2 = data.k * data.k
    rows = [data.row(0, order), data.row(1, order)]
    for j in range(2, order + 1):
        prev2 = rows[j - 2]
        row = []
        for i in range(order + 1):
            upper = prev2[i + 2] if i + 2 <= order else 0.0
            row.append(-upper - k2 * prev2[i])
        rows.append(row)
    out = TruncatedSeries.constant(0.0, 2, order)
    pos = {e: i for i, e in enumerate(exponent_list(2, order))}
    for i in range(order + 1):
        for j in range(order + 1 - i):
            out.coeffs[pos[(i, j)]] = rows[j][i] / (
                math.factorial(i) * math.factorial(j))
    return out


def _direction(rng, dim):
    if dim == 2:
        angle = rng.uniform(0.0, 2.0 * math.pi)
        return (math.cos(angle), math.sin(angle))
    v = rng.standard_normal(3)
    v = v / np.linalg.norm(v)
    return tuple(float(c) for c in v)


def random_helmholtz_field(seed, n_terms=8, dim=2, k=1.0):
    """Seeded superposition of plane waves: an exact Helmholtz solution.

    Amplitudes are complex Gaussian, directions uniform on the circle or
    sphere; the same seed always returns the same field.
    """
    if n_terms < 1:
        raise BadParameter("need at least one plane wave")
    rng = np.random.default_rng(seed)
    if isinstance(seed, np.random.SeedSequence):
        label = "-".join(str(v) for v in (seed.entropy,) + tuple(seed.spawn_key))
    else:
        label = str(seed)
    terms = []
    for _ in range(n_terms):
        re, im = rng.standard_normal(2) / math.sqrt(2.0)
        terms.append((complex(re, im), _direction(rng, dim)))
    expr = None
    names = ("x", "y", "z")[:dim]
    for amp, direction in terms:
        phase = None
        for name, d in zip(names, direction):
            part = Mul(Num(k * d), Var(name))
            phase = part if phase is None else Add(phase, part)
        term = Mul(Add(Num(amp.real), Mul(Imag(), Num(amp.imag))),
                   Call("exp", Mul(Imag(), phase)))
        expr = term if expr is None else Add(expr, term)
    return FieldDef(
        name=f"random-{dim}d-{label}", dim=dim, time_dependent=False,
        expr=expr, params={},
        provenance="seeded random plane-wave superposition",
        plane_waves=PlaneWaveSum(tuple(terms), k),
        tags=frozenset({"helmholtz"}))


def monochromatic_wave(psi, phi):
    """Wave psi*cos t + phi*sin t; solves the c=1 wave equation whenever
    both inputs solve the k=1 Helmholtz equation (then Psi_tt = -Psi =
    laplacian Psi)."""
    if psi.dim != phi.dim:
        raise DimMismatch(f"dim {psi.dim} vs {phi.dim}")
    expr = Add(Mul(psi.expr, Call("cos", Var("t"))),
               Mul(phi.expr, Call("sin", Var("t"))))
    params = dict(phi.params)
    params.update(psi.params)
    return FieldDef(name=f"{psi.name}-wave", dim=psi.dim,
                    time_dependent=True, expr=expr, params=params,
                    provenance=f"monochromatic wave from {psi.name}, {phi.name}",
                    tags=frozenset({"helmholtz", "wave"}))


def _substitute_scaled(expr, factors):
    if isinstance(expr, Var):
        f = factors.get(expr.name, 1.0)
        return expr if f == 1.0 else Mul(Num(f), expr)
    if isinstance(expr, (Num, Imag, Param)):
        return expr
    if isinstance(expr, Neg):
        return Neg(_substitute_scaled(expr.arg, factors))
    if isinstance(expr, (Add, Sub, Mul, Div)):
        return type(expr)(_substitute_scaled(expr.left, factors),
                          _substitute_scaled(expr.right, factors))
    if isinstance(expr, Pow):
        return Pow(_substitute_scaled(expr.base, factors), expr.exponent)
    if isinstance(expr, Call):
        return Call(expr.fn, _substitute_scaled(expr.arg, factors))
    raise ShapeError(f"cannot rescale node {expr!r}")


def rescale_wave(fd, k, c):
    """Wave for general wavenumber and speed from a k=1, c=1 wave, by the
    substitution (x, y[, z], t) -> (k x, k y[, k z], c k t)."""
    if k <= 0 or c <= 0:
        raise BadParameter("k and c must be positive")
    if fd.wrap is not None:
        raise ShapeError("cannot rescale a radially composed field")
    factors = {name: float(k) for name in ("x", "y", "z")[: fd.dim]}
    factors["t"] = float(c * k)
    expr = _substitute_scaled(fd.expr, factors)
    return FieldDef(name=f"{fd.name}@k={k:g},c={c:g}", dim=fd.dim,
                    time_dependent=fd.time_dependent, expr=expr,
                    params=dict(fd.params),
                    provenance=f"{fd.name} rescaled to k={k:g}, c={c:g}",
                    tags=fd.tags)


# -- elliptic obstruction -------------------------------------------------------

def hessian_pencil_definite(j, tol=None, n_angles=3600):
    """Whether some real combination of Re(Hess) and Im(Hess) is definite.

    2x2 pencils get an exact boundary check (the determinant is a
    quadratic form in the pencil angle; its maximum over the circle is an
    eigenvalue problem) plus an angle sweep for the witness. 3x3 pencils
    are decided by the eigenvalue sign test on the angle sweep.
    Returns (flag, witness) with witness = (lam, mu) when definite.
    """
    tol = tol or ToleranceSet()
    if not isinstance(j, (Jet2, Jet3)):
        raise ShapeError("expected a Jet2 or Jet3")
    scale = max(float(np.max(np.abs(j.hessian()))), 1e-300)
    if abs(j.a) >= tol.zero * (1.0 + scale):
        raise NotOnDislocation(f"|value| = {abs(j.a):.3g}; not a zero")
    H = j.hessian()
    A, B = H.real, H.imag
    thresh = tol.curv * scale * scale
    angles = np.linspace(0.0, math.pi, n_angles, endpoint=False)

    if H.shape == (2, 2):
        alpha = float(np.linalg.det(A))
        gamma = float(np.linalg.det(B))
        beta = float(np.linalg.det(A + B)) - alpha - gamma
        quad = np.array([[alpha, beta / 2.0], [beta / 2.0, gamma]])
        if float(np.linalg.eigvalsh(quad)[1]) <= thresh:
            return False, None
        cs, sn = np.cos(angles), np.sin(angles)
        dets = alpha * cs * cs + beta * cs * sn + gamma * sn * sn
        hit = np.nonzero(dets > thresh)[0]
        if hit.size == 0:
            return False, None
        i = int(hit[0])
        return True, (float(cs[i]), float(sn[i]))

    # a definite matrix has |trace| >= n * min|eig| > 0, so a pencil of
    # traceless matrices (every Helmholtz Hessian at a zero) never qualifies
    if max(abs(np.trace(A)), abs(np.trace(B))) <= tol.curv * scale:
        return False, None
    cs, sn = np.cos(angles), np.sin(angles)
    pencil = cs[:, None, None] * A[None] + sn[:, None, None] * B[None]
    eigs = np.linalg.eigvalsh(pencil)
    pos = (eigs > tol.curv * scale).all(axis=1)
    neg = (eigs < -tol.curv * scale).all(axis=1)
    hit = np.nonzero(pos | neg)[0]
    if hit.size == 0:
        return False, None
    i = int(hit[0])
    return True, (float(cs[i]), float(sn[i]))


# -- plane-wave CSV files --------------------------------------------------------

def plane_waves_to_csv(fd, path):
    """Rows of (re, im, angle(s)); 2-D uses one angle, 3-D azimuth+polar."""
    pw = fd.plane_waves if isinstance(fd, FieldDef) else fd
    if pw is None:
        raise ShapeError("field carries no plane-wave data")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        if len(pw.terms[0][1]) == 2:
            writer.writerow(["re", "im", "angle"])
            for amp, d in pw.terms:
                writer.writerow([repr(amp.real), repr(amp.imag),
                                 repr(math.atan2(d[1], d[0]))])
        else:
            writer.writerow(["re", "im", "azimuth", "polar"])
            for amp, d in pw.terms:
                writer.writerow([repr(amp.real), repr(amp.imag),
                                 repr(math.atan2(d[1], d[0])),
                                 repr(math.acos(max(-1.0, min(1.0, d[2]))))])


def plane_waves_from_csv(path, k=1.0, name=None):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        dim = 2 if len(header) == 3 else 3
        terms = []
        for row in reader:
            re, im = float(row[0]), float(row[1])
            if dim == 2:
                a = float(row[2])
                d = (math.cos(a), math.sin(a))
            else:
                az, pol = float(row[2]), float(row[3])
                d = (math.sin(pol) * math.cos(az),
                     math.sin(pol) * math.sin(az), math.cos(pol))
            terms.append((complex(re, im), d))
    fd = _field_from_terms(terms, dim, k, name or "plane-waves")
    return fd


def _field_from_terms(terms, dim, k, name):
    expr = None
    names = ("x", "y", "z")[:dim]
    for amp, direction in terms:
        phase = None
        for vname, d in zip(names, direction):
            part = Mul(Num(k * d), Var(vname))
            phase = part if phase is None else Add(phase, part)
        term = Mul(Add(Num(amp.real), Mul(Imag(), Num(amp.imag))),
                   Call("exp", Mul(Imag(), phase)))
        expr = term if expr is None else Add(expr, term)
    return FieldDef(name=name, dim=dim, time_dependent=False, expr=expr,
                    params={}, provenance="plane-wave superposition file",
                    plane_waves=PlaneWaveSum(tuple(terms), k),
                    tags=frozenset({"helmholtz"}))
