"""Classification of phase singularities from truncated jets.

A zero of a complex field is classified by computable invariants of its
jet: the rank of the real differential, the directional derivatives of the
Jacobian determinant along the kernel, and the curvature of the image of
the critical curve (the discriminant) relative to the second-order opening
of the map. The decision never constructs a normalizing change of
coordinates; it evaluates the invariants the classes are defined by.

2-D classes: Regular, Hyperbolic, Elliptic, DegenerateFold(m, +/-), Cusp.
3-D classes: Regular, DefiniteHyperbolic, DefiniteElliptic, Indefinite,
SpatialCusp. Anything that fails the explicit tests is reported as
Degenerate with a machine-readable reason.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import (
    AllOrdersVanish,
    InsufficientOrder,
    NotCritical,
    NotOnDislocation,
    OnDislocation,
    ShapeError,
)
from .fieldlang import RadialTransform, eval_field_jet  # re-exported type
from .taylor import TruncatedSeries, exponent_list

__all__ = [
    "ToleranceSet", "SingularityClass", "Jet2", "Jet3", "ClassificationReport",
    "RadialTransform", "jet_from_series", "classify_jet_2d", "classify_jet_3d",
    "contact_order", "classify_phase_critical", "classify_at", "jet_hessian",
]


@dataclass(frozen=True)
class ToleranceSet:
    """Relative thresholds used by the decision procedures.

    All comparisons are normalized by the jet scale (largest Taylor
    coefficient magnitude) raised to the homogeneity degree of the
    quantity, so classifications are invariant under rescaling the field.
    """

    rank: float = 1e-7
    fold: float = 1e-7
    curv: float = 1e-7
    grad: float = 1e-8
    hess: float = 1e-8
    zero: float = 1e-10

    def as_dict(self):
        return {"rank": self.rank, "fold": self.fold, "curv": self.curv,
                "grad": self.grad, "hess": self.hess, "zero": self.zero}


@dataclass(frozen=True)
class SingularityClass:
    kind: str
    order: Optional[int] = None
    sign: Optional[int] = None
    reason: Optional[str] = None

    def label(self):
        if self.kind == "DegenerateFold":
            return f"DegenerateFold({self.order},{'+' if self.sign > 0 else '-'})"
        if self.kind == "Degenerate":
            return f"Degenerate({self.reason})"
        return self.kind

    def __str__(self):
        return self.label()


REGULAR = SingularityClass("Regular")
HYPERBOLIC = SingularityClass("Hyperbolic")
ELLIPTIC = SingularityClass("Elliptic")
CUSP = SingularityClass("Cusp")
DEFINITE_HYPERBOLIC = SingularityClass("DefiniteHyperbolic")
DEFINITE_ELLIPTIC = SingularityClass("DefiniteElliptic")
INDEFINITE = SingularityClass("Indefinite")
SPATIAL_CUSP = SingularityClass("SpatialCusp")


def degenerate(reason):
    return SingularityClass("Degenerate", reason=reason)


def degenerate_fold(m, sign):
    return SingularityClass("DegenerateFold", order=m, sign=sign)


# -- jets -------------------------------------------------------------------

@dataclass(frozen=True)
class Jet2:
    """Planar jet in the derivative convention: coefficient q equals the
    corresponding partial derivative at the base point (a = value,
    b = psi_x, c = psi_y, e = psi_xx, f = psi_xy, g = psi_yy, h = psi_xxx,
    k = psi_xxy, ell = psi_xyy, m = psi_yyy)."""

    basepoint: tuple
    a: complex
    b: complex
    c: complex
    e: complex
    f: complex
    g: complex
    h: complex
    k: complex
    ell: complex
    m: complex
    series: Optional[TruncatedSeries] = None

    def to_series(self, order=6):
        if self.series is not None:
            return self.series
        s = TruncatedSeries.constant(self.a, 2, order)
        vals = {(1, 0): self.b, (0, 1): self.c, (2, 0): self.e,
                (1, 1): self.f, (0, 2): self.g, (3, 0): self.h,
                (2, 1): self.k, (1, 2): self.ell, (0, 3): self.m}
        pos = {e: i for i, e in enumerate(exponent_list(2, order))}
        for exps, val in vals.items():
            w = math.factorial(exps[0]) * math.factorial(exps[1])
            s.coeffs[pos[exps]] = val / w
        return s

    def gradient(self):
        return np.array([self.b, self.c])

    def hessian(self):
        return np.array([[self.e, self.f], [self.f, self.g]])


@dataclass(frozen=True)
class Jet3:
    """Spatial jet: partial derivatives keyed by exponent triple up to
    total degree 3, graded-lex ordered (an artifact convention; there is
    no standard letter naming in three variables)."""

    basepoint: tuple
    derivs: dict
    series: Optional[TruncatedSeries] = None

    @property
    def a(self):
        return self.derivs[(0, 0, 0)]

    def to_series(self, order=6):
        if self.series is not None:
            return self.series
        s = TruncatedSeries.constant(self.derivs[(0, 0, 0)], 3, order)
        pos = {e: i for i, e in enumerate(exponent_list(3, order))}
        for exps, val in self.derivs.items():
            w = 1.0
            for p in exps:
                w *= math.factorial(p)
            s.coeffs[pos[exps]] = val / w
        return s

    def gradient(self):
        return np.array([self.derivs[(1, 0, 0)], self.derivs[(0, 1, 0)],
                         self.derivs[(0, 0, 1)]])

    def hessian(self):
        d = self.derivs
        return np.array([
            [d[(2, 0, 0)], d[(1, 1, 0)], d[(1, 0, 1)]],
            [d[(1, 1, 0)], d[(0, 2, 0)], d[(0, 1, 1)]],
            [d[(1, 0, 1)], d[(0, 1, 1)], d[(0, 0, 2)]],
        ])


def jet_from_series(s, basepoint=None):
    """Extract a Jet2/Jet3 from a series (order >= 3 required)."""
    if s.order < 3:
        raise InsufficientOrder(
            f"cubic jet requested from an order-{s.order} series")
    if s.batch_size is not None:
        raise ShapeError("jets are extracted from scalar series only")
    if s.nvars == 2:
        bp = tuple(basepoint) if basepoint is not None else (0.0, 0.0)
        d = {e: complex(s.deriv(e)) for e in exponent_list(2, 3)}
        return Jet2(bp, d[(0, 0)], d[(1, 0)], d[(0, 1)], d[(2, 0)],
                    d[(1, 1)], d[(0, 2)], d[(3, 0)], d[(2, 1)], d[(1, 2)],
                    d[(0, 3)], series=s)
    if s.nvars == 3:
        bp = tuple(basepoint) if basepoint is not None else (0.0, 0.0, 0.0)
        derivs = {e: complex(s.deriv(e)) for e in exponent_list(3, 3)}
        return Jet3(bp, derivs, series=s)
    raise ShapeError(f"jets are planar or spatial, got nvars={s.nvars}")


def jet_hessian(j):
    return j.hessian()


# -- reports ----------------------------------------------------------------

@dataclass
class ClassificationReport:
    sclass: SingularityClass
    basepoint: tuple
    dim: int
    scale: float
    singular_values: tuple
    tolerances: ToleranceSet = field(default_factory=ToleranceSet)
    kernel: Optional[tuple] = None
    vlambda: Optional[float] = None
    dlambda: Optional[tuple] = None
    vvlambda: Optional[float] = None
    fold_opening: Optional[complex] = None
    opening_normal: Optional[float] = None
    tangent: Optional[complex] = None
    curvature_normal: Optional[float] = None
    curvature_product: Optional[float] = None
    contact: Optional[tuple] = None
    cusp_orders: Optional[tuple] = None
    q_eigenvalues: Optional[tuple] = None

    def to_json(self):
        def c2(z):
            return None if z is None else [float(np.real(z)), float(np.imag(z))]

        return {
            "class": self.sclass.label(),
            "basepoint": [float(v) for v in self.basepoint],
            "dim": self.dim,
            "scale": self.scale,
            "singular_values": list(self.singular_values),
            "kernel": None if self.kernel is None else [float(v) for v in self.kernel],
            "vlambda": self.vlambda,
            "dlambda": None if self.dlambda is None else [float(v) for v in self.dlambda],
            "vvlambda": self.vvlambda,
            "fold_opening": c2(self.fold_opening),
            "opening_normal": self.opening_normal,
            "tangent": c2(self.tangent),
            "curvature_normal": self.curvature_normal,
            "curvature_product": self.curvature_product,
            "contact_order": None if self.contact is None else list(self.contact),
            "cusp_orders": None if self.cusp_orders is None else list(self.cusp_orders),
            "q_eigenvalues": None if self.q_eigenvalues is None else list(self.q_eigenvalues),
            "tolerances": self.tolerances.as_dict(),
        }


# -- univariate helpers ------------------------------------------------------

def _poly_mul(a, b, n):
    return np.convolve(a, b)[: n + 1]


def _compose_series(series, polys, n):
    """Compose a multivariate series with zero-constant univariate
    polynomials (one per variable), truncated at degree n."""
    powers = []
    for poly in polys:
        plist = [np.zeros(n + 1, dtype=complex)]
        plist[0][0] = 1.0
        cur = plist[0]
        for _ in range(series.order):
            cur = _poly_mul(cur, poly, n)
            plist.append(cur)
        powers.append(plist)
    out = np.zeros(n + 1, dtype=complex)
    for idx, exps in enumerate(exponent_list(series.nvars, series.order)):
        coeff = series.coeffs[idx]
        if coeff == 0:
            continue
        term = None
        for v, p in enumerate(exps):
            if p:
                term = powers[v][p] if term is None else _poly_mul(term, powers[v][p], n)
        if term is None:
            out[0] += coeff
        else:
            out = out + coeff * term
    return out


def _jacobian_det_series(s):
    """det of the real differential of a planar complex series, as a series
    (coefficients exact to one order below the input)."""
    u, w = s.real_part(), s.imag_part()
    return u.diff(0) * w.diff(1) - u.diff(1) * w.diff(0)


def _critical_curve_2d(lam, n):
    """Parametrize the zero curve of lam through 0 by the free coordinate
    (increasing), solving the other coordinate order by order. Returns
    (xpoly, ypoly) of length n+1."""
    lam_x = float(lam.deriv((1, 0)).real)
    lam_y = float(lam.deriv((0, 1)).real)
    if abs(lam_x) >= abs(lam_y):
        solve_var, pivot = 0, lam_x
    else:
        solve_var, pivot = 1, lam_y
    free_var = 1 - solve_var
    xi = np.zeros(n + 1, dtype=complex)
    free = np.zeros(n + 1, dtype=complex)
    free[1] = 1.0
    polys = [None, None]
    polys[free_var] = free
    for order_k in range(1, n + 1):
        polys[solve_var] = xi
        residual = _compose_series(lam, polys, order_k)[order_k].real
        xi = xi.copy()
        xi[order_k] = -residual / pivot
    polys[solve_var] = xi
    return polys


def _critical_curve_3d(s, tol, scale):
    """Zero curve of the cross product of the gradient rows of a spatial
    complex series. Returns (polys, tangent) or None when the curve is not
    transversally cut at this order."""
    u, w = s.real_part(), s.imag_part()
    du = [u.diff(ax) for ax in range(3)]
    dw = [w.diff(ax) for ax in range(3)]
    F = [du[1] * dw[2] - du[2] * dw[1],
         du[2] * dw[0] - du[0] * dw[2],
         du[0] * dw[1] - du[1] * dw[0]]
    units = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    DF = np.array([[float(Fi.deriv(e).real) for e in units] for Fi in F])
    U, sig, Vt = np.linalg.svd(DF)
    if sig[1] <= tol.fold * max(sig[0], scale**2):
        return None
    tangent = Vt[2]
    if tangent[np.argmax(np.abs(tangent))] < 0:
        tangent = -tangent
    n1, n2 = Vt[0], Vt[1]
    M = DF @ np.stack([n1, n2], axis=1)
    n = s.order - 1
    polys = [np.zeros(n + 1, dtype=complex) for _ in range(3)]
    for v in range(3):
        polys[v][1] = tangent[v]
    for order_k in range(2, n + 1):
        residual = np.array(
            [_compose_series(Fi, polys, order_k)[order_k].real for Fi in F])
        sol, *_ = np.linalg.lstsq(M, -residual, rcond=None)
        for v in range(3):
            polys[v][order_k] += n1[v] * sol[0] + n2[v] * sol[1]
    return polys, tangent


def _normal_component(z, nhat):
    return float(np.real(z * np.conj(nhat)))


def _curve_orders(gamma, tol_abs):
    """(n, m) vanishing orders of a parametrized plane curve: n = first
    nonzero coefficient order, m = first order with a component transverse
    to the leading direction."""
    n = None
    for j in range(1, len(gamma)):
        if abs(gamma[j]) > tol_abs:
            n = j
            break
    if n is None:
        return None
    lead = gamma[n] / abs(gamma[n])
    nhat = 1j * lead
    for j in range(n + 1, len(gamma)):
        if abs(_normal_component(gamma[j], nhat)) > tol_abs:
            return (n, j)
    return (n, None)


# -- 2-D classification ------------------------------------------------------

def _fold_frame(j, tol):
    """Shared geometry of the rank-1 branch: kernel, Jacobian-determinant
    series, and when a critical curve exists, the discriminant curve with
    its tangent/normal frame."""
    s = j.to_series()
    scale = max(s.norm(), 1e-300)
    D = np.array([[j.b.real, j.c.real], [j.b.imag, j.c.imag]])
    U, sig, Vt = np.linalg.svd(D)
    v = Vt[1]
    if v[np.argmax(np.abs(v))] < 0:
        v = -v
    lam = _jacobian_det_series(s)
    grad = (float(lam.deriv((1, 0)).real), float(lam.deriv((0, 1)).real))
    vlam = v[0] * grad[0] + v[1] * grad[1]
    Q = j.e * v[0] ** 2 + 2 * j.f * v[0] * v[1] + j.g * v[1] ** 2
    frame = {
        "series": s, "scale": scale, "sigma": (float(sig[0]), float(sig[1])),
        "kernel": (float(v[0]), float(v[1])), "lam": lam, "dlam": grad,
        "vlambda": float(vlam), "Q": complex(Q),
    }
    if math.hypot(*grad) > tol.fold * scale**2:
        n = s.order - 1
        polys = _critical_curve_2d(lam, n)
        gamma = _compose_series(s, polys, n)
        frame["gamma"] = gamma
        if abs(gamma[1]) > tol.fold * scale:
            that = gamma[1] / abs(gamma[1])
            nhat = 1j * that
            frame["tangent"] = complex(that)
            frame["normal"] = complex(nhat)
            frame["kappa_n"] = _normal_component(2.0 * gamma[2], nhat)
            frame["Q_n"] = _normal_component(Q, nhat)
    return frame


def _contact_scan(frame, tol, mmax, start=2):
    gamma, nhat = frame["gamma"], frame["normal"]
    Q_n, scale = frame["Q_n"], frame["scale"]
    for order_m in range(start, mmax + 1):
        if order_m >= len(gamma):
            break
        c = _normal_component(gamma[order_m], nhat)
        if abs(c) > tol.curv * scale:
            return order_m, (1 if c * Q_n > 0 else -1)
    raise AllOrdersVanish(
        f"no transverse contact up to order {mmax}")


def classify_jet_2d(j, tol=None):
    """Decide the planar singularity class of a jet taken at a zero."""
    tol = tol or ToleranceSet()
    s = j.to_series()
    scale = max(s.norm(), 1e-300)
    if abs(j.a) >= tol.zero * (1.0 + scale):
        raise NotOnDislocation(
            f"|value| = {abs(j.a):.3g} at {j.basepoint}; not a zero")

    frame = _fold_frame(j, tol)
    sig = frame["sigma"]
    report = ClassificationReport(
        sclass=degenerate("unclassified"), basepoint=j.basepoint, dim=2,
        scale=scale, singular_values=sig, tolerances=tol)

    if sig[0] <= tol.rank * scale:
        report.sclass = degenerate("corank 2")
        return report
    if sig[1] / sig[0] > tol.rank:
        report.sclass = REGULAR
        return report

    report.kernel = frame["kernel"]
    report.vlambda = frame["vlambda"]
    report.dlambda = frame["dlam"]
    report.fold_opening = frame["Q"]
    s2 = scale * scale

    if abs(frame["vlambda"]) > tol.fold * s2:
        if "kappa_n" not in frame:
            report.sclass = degenerate("discriminant tangent undefined")
            return report
        report.tangent = frame["tangent"]
        report.curvature_normal = frame["kappa_n"]
        report.opening_normal = frame["Q_n"]
        product = frame["kappa_n"] * frame["Q_n"]
        report.curvature_product = product
        if abs(product) > tol.curv * s2:
            report.sclass = ELLIPTIC if product > 0 else HYPERBOLIC
            return report
        try:
            m, sign = _contact_scan(frame, tol, mmax=s.order - 1)
        except AllOrdersVanish:
            report.sclass = degenerate("flat discriminant contact")
            return report
        report.contact = (m, sign)
        report.sclass = degenerate_fold(m, sign)
        return report

    # kernel direction is tangent to {lam = 0}: cusp candidates
    lam = frame["lam"]
    v = frame["kernel"]
    hess = np.array([[float(lam.deriv((2, 0)).real), float(lam.deriv((1, 1)).real)],
                     [float(lam.deriv((1, 1)).real), float(lam.deriv((0, 2)).real)]])
    vvlam = float(np.array(v) @ hess @ np.array(v))
    report.vvlambda = vvlam
    dlam_norm = math.hypot(*frame["dlam"])
    if dlam_norm > tol.fold * s2 and abs(vvlam) > tol.fold * s2:
        report.sclass = CUSP
        if "gamma" in frame:
            report.cusp_orders = _curve_orders(frame["gamma"],
                                               tol.curv * scale)
        return report
    report.sclass = degenerate("beyond fold/cusp")
    return report


def contact_order(j, kernel=None, mmax=None, tol=None):
    """First transverse contact order of the discriminant with its tangent
    line, and the sign of the leading coefficient relative to the fold
    opening (+ convex, - concave)."""
    tol = tol or ToleranceSet()
    frame = _fold_frame(j, tol)
    mmax = mmax if mmax is not None else frame["series"].order - 1
    if frame["series"].order < mmax:
        raise InsufficientOrder(
            f"series order {frame['series'].order} < mmax {mmax}")
    if "normal" not in frame:
        raise AllOrdersVanish("discriminant tangent undefined")
    return _contact_scan(frame, tol, mmax)


# -- 3-D classification ------------------------------------------------------

def classify_jet_3d(j, tol=None):
    """Decide the spatial singularity class of a jet taken at a zero."""
    tol = tol or ToleranceSet()
    s = j.to_series()
    scale = max(s.norm(), 1e-300)
    if abs(j.a) >= tol.zero * (1.0 + scale):
        raise NotOnDislocation(
            f"|value| = {abs(j.a):.3g} at {j.basepoint}; not a zero")

    grad = j.gradient()
    D = np.vstack([grad.real, grad.imag])
    U, sig, Vt = np.linalg.svd(D)
    report = ClassificationReport(
        sclass=degenerate("unclassified"), basepoint=j.basepoint, dim=3,
        scale=scale, singular_values=(float(sig[0]), float(sig[1])),
        tolerances=tol)

    if sig[0] <= tol.rank * scale:
        report.sclass = degenerate("zero differential")
        return report
    if sig[1] / sig[0] > tol.rank:
        report.sclass = REGULAR
        return report

    # rank 1: kernel plane and the direction normal to the image line
    k1, k2 = Vt[1], Vt[2]
    image_dir = complex(U[0, 0], U[1, 0])
    nhat0 = 1j * image_dir
    H = j.hessian()
    q = np.empty((2, 2))
    basis = (k1, k2)
    for aidx in range(2):
        for bidx in range(2):
            q[aidx, bidx] = _normal_component(
                basis[aidx] @ H @ basis[bidx], nhat0)
    eigvals, eigvecs = np.linalg.eigh(q)
    report.q_eigenvalues = (float(eigvals[0]), float(eigvals[1]))
    nonzero = np.abs(eigvals) > tol.fold * scale

    if nonzero.all() and eigvals[0] * eigvals[1] < 0:
        report.sclass = INDEFINITE
        return report

    if nonzero.all():
        curve = _critical_curve_3d(s, tol, scale)
        if curve is None:
            report.sclass = degenerate("critical set is not a curve")
            return report
        polys, tangent = curve
        n = s.order - 1
        gamma = _compose_series(s, polys, n)
        if abs(gamma[1]) <= tol.fold * scale:
            report.sclass = degenerate("discriminant tangent undefined")
            return report
        that = gamma[1] / abs(gamma[1])
        nhat = 1j * that
        flip = _normal_component(nhat, nhat0)
        kappa_n = _normal_component(2.0 * gamma[2], nhat)
        q_mean = flip * float(eigvals.mean())
        product = kappa_n * q_mean
        report.tangent = complex(that)
        report.curvature_normal = kappa_n
        report.opening_normal = q_mean
        report.curvature_product = product
        if abs(product) <= tol.curv * scale * scale:
            report.sclass = degenerate("flat discriminant contact")
            return report
        report.sclass = DEFINITE_ELLIPTIC if product > 0 else DEFINITE_HYPERBOLIC
        return report

    if nonzero.any():
        # one vanishing eigenvalue: cusp test along its direction with the
        # 2x2 determinant of the differential restricted to (v0, u0)
        null_idx = int(np.argmin(np.abs(eigvals)))
        v0 = eigvecs[0, null_idx] * k1 + eigvecs[1, null_idx] * k2
        u0 = Vt[0]
        dv0 = sum(s.diff(ax) * v0[ax] for ax in range(3))
        du0 = sum(s.diff(ax) * u0[ax] for ax in range(3))
        lam_r = (dv0.conj() * du0).imag_part()
        units = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
        grad_l = np.array([float(lam_r.deriv(e).real) for e in units])
        v0lam = float(v0 @ grad_l)
        hess_l = np.empty((3, 3))
        for ai in range(3):
            for bi in range(3):
                exps = tuple(sorted_exp(ai, bi))
                hess_l[ai, bi] = float(lam_r.deriv(exps).real)
        vvlam = float(v0 @ hess_l @ v0)
        report.kernel = tuple(float(c) for c in v0)
        report.vlambda = v0lam
        report.dlambda = tuple(float(g) for g in grad_l)
        report.vvlambda = vvlam
        s2 = scale * scale
        if (abs(v0lam) <= tol.fold * s2
                and np.linalg.norm(grad_l) > tol.fold * s2
                and abs(vvlam) > tol.fold * s2):
            report.sclass = SPATIAL_CUSP
            curve = _critical_curve_3d(s, tol, scale)
            if curve is not None:
                gamma = _compose_series(s, curve[0], s.order - 1)
                report.cusp_orders = _curve_orders(gamma, tol.curv * scale)
            return report
        report.sclass = degenerate("beyond fold/cusp")
        return report

    report.sclass = degenerate("degenerate restricted quadratic")
    return report


def sorted_exp(ai, bi):
    e = [0, 0, 0]
    e[ai] += 1
    e[bi] += 1
    return tuple(e)


# -- phase critical points ---------------------------------------------------

def classify_phase_critical(fd, point, params=None, tol=None):
    """Classify a critical point of the phase away from the zero set:
    'Extremum', 'Saddle' or 'DegenerateCritical'."""
    tol = tol or ToleranceSet()
    if fd.dim != 2:
        raise ShapeError("phase critical points are classified in the plane")
    s = eval_field_jet(fd, point, params, order=2)
    j = jet_from_series(
        TruncatedSeries(s.nvars, s.order, s.coeffs) if s.order >= 3 else _pad(s),
        basepoint=point)
    a = j.a
    scale = max(s.norm(), 1e-300)
    if abs(a) <= tol.zero * (1.0 + scale):
        raise OnDislocation(f"|value| = {abs(a):.3g}; phase undefined")
    grad = j.gradient()
    grad_theta = np.imag(grad / a)
    if np.linalg.norm(grad_theta) >= tol.grad:
        raise NotCritical(
            f"|grad theta| = {np.linalg.norm(grad_theta):.3g} >= {tol.grad}")
    H = j.hessian()
    hess_theta = np.imag(H / a - np.outer(grad, grad) / a**2)
    det = float(np.linalg.det(hess_theta))
    hnorm = max(float(np.abs(hess_theta).max()), 1e-300)
    if abs(det) <= tol.hess * hnorm * hnorm:
        return "DegenerateCritical"
    return "Extremum" if det > 0 else "Saddle"


def _pad(s):
    """Zero-pad a low-order series to order 3 for jet extraction."""
    out = TruncatedSeries.constant(0.0, s.nvars, 3)
    pos = {e: i for i, e in enumerate(exponent_list(s.nvars, 3))}
    for i, e in enumerate(exponent_list(s.nvars, s.order)):
        out.coeffs[pos[e]] = s.coeffs[i]
    return out


# -- conveniences ------------------------------------------------------------

def classify_at(fd, point, params=None, order=6, tol=None):
    """Jet the field at a point and classify (dimension-dispatched)."""
    s = eval_field_jet(fd, point, params, order=order)
    j = jet_from_series(s, basepoint=point)
    if fd.dim == 2:
        return classify_jet_2d(j, tol)
    return classify_jet_3d(j, tol)
