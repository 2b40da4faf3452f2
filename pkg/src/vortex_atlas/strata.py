"""The 16-dimensional space of planar Helmholtz 3-jets and its strata.

A k=1 Helmholtz jet satisfies three linear relations among its Taylor
coefficients (value+trace rows), leaving base point plus seven complex
coordinates (a, b, c, e, f, h, k) free. Inside that space, nested strata
pick out zero jets that are still regular (codimension 2), fold-like
(codimension 3), cusp-like via iterated-Jacobian determinants
(codimension 4), and fully degenerate first-order jets (codimension 6).
Membership is decided by the defining equations with degree-normalized
residuals; anything ambiguous is reported Unresolved rather than guessed.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .classify import ToleranceSet, classify_jet_2d, classify_jet_3d, jet_from_series
from .dislocation import Region, scan_zeros_2d, trace_dislocation_3d
from .errors import NotHelmholtzJet, ShapeError
from .fieldlang import eval_field_jet
from .helmholtz import hessian_pencil_definite, random_helmholtz_field

STRATUM_TOL = 1e-8
GRAY_FACTOR = 10.0


class StratumId(Enum):
    W1 = "W1"
    W3 = "W3"
    W4 = "W4"
    W5 = "W5"
    UNRESOLVED = "Unresolved"

    @property
    def codim(self):
        return {"W1": 6, "W3": 4, "W4": 3, "W5": 2}.get(self.value)


@dataclass(frozen=True)
class HelmholtzJet3:
    """Free coordinates of a planar Helmholtz 3-jet (derivative
    convention); the dependent coefficients g, l, m are recovered from the
    equation's relations exactly by construction."""

    basepoint: tuple
    a: complex
    b: complex
    c: complex
    e: complex
    f: complex
    h: complex
    k: complex

    @property
    def g(self):
        return -(self.a + self.e)

    @property
    def ell(self):
        return -(self.b + self.h)

    @property
    def m(self):
        return -(self.c + self.k)

    def scaled(self, factor):
        return HelmholtzJet3(self.basepoint, self.a * factor, self.b * factor,
                             self.c * factor, self.e * factor,
                             self.f * factor, self.h * factor,
                             self.k * factor)


@dataclass
class StratumReport:
    stratum: StratumId
    residuals: dict
    tol: float

    def to_json(self):
        return {"stratum": self.stratum.value,
                "codim": self.stratum.codim,
                "residuals": {k: float(v) for k, v in self.residuals.items()},
                "tol": self.tol}


@dataclass
class ConsistencyReport:
    location: tuple
    stratum: StratumId
    sclass: object
    consistent: bool
    unresolved: bool

    def to_json(self):
        return {"location": [float(v) for v in self.location],
                "stratum": self.stratum.value,
                "class": self.sclass.label(),
                "consistent": self.consistent,
                "unresolved": self.unresolved}


def project_to_helmholtz_jet(j, k=1.0, tol=STRATUM_TOL):
    """Extract the free jet coordinates, verifying the equation's three
    linear relations; raises NotHelmholtzJet with the violated relation."""
    k2 = k * k
    norm = max(abs(j.a), abs(j.b), abs(j.c), abs(j.e), abs(j.f), abs(j.g),
               abs(j.h), abs(j.k), abs(j.ell), abs(j.m), 1e-300)
    relations = (
        ("e+g+a", j.e + j.g + k2 * j.a),
        ("h+l+b", j.h + j.ell + k2 * j.b),
        ("k+m+c", j.k + j.m + k2 * j.c),
    )
    for name, value in relations:
        if abs(value) >= tol * norm:
            raise NotHelmholtzJet(name, abs(value))
    return HelmholtzJet3(j.basepoint, j.a, j.b, j.c, j.e, j.f, j.h, j.k)


def _membership_values(hj):
    a1, a2 = hj.a.real, hj.a.imag
    b1, b2 = hj.b.real, hj.b.imag
    c1, c2 = hj.c.real, hj.c.imag
    e1, e2 = hj.e.real, hj.e.imag
    f1, f2 = hj.f.real, hj.f.imag
    d1 = (e1 * c2 - e2 * c1) + (b1 * f2 - b2 * f1)
    d2 = (f1 * c2 - f2 * c1) - (b1 * (a2 + e2) - b2 * (a1 + e1))
    return {
        "a": abs(hj.a),
        "b": abs(hj.b),
        "c": abs(hj.c),
        "cross": abs(b1 * c2 - b2 * c1),
        "border1": abs(d1 * c1 - d2 * b1),
        "border2": abs(d1 * c2 - d2 * b2),
    }


def stratum_membership(hj, tol=STRATUM_TOL):
    """Deepest stratum whose equations hold, testing finer strata first.

    Residuals are normalized by the jet scale raised to each equation's
    homogeneity degree, so assignments are scale invariant. A deciding
    value inside the gray zone (tol, 10 tol) yields Unresolved: the locus
    of jets more degenerate than the cusp equations has no defining
    equations here, and near-threshold data cannot be placed.
    """
    vals = _membership_values(hj)
    scale = max(abs(hj.a), abs(hj.b), abs(hj.c), abs(hj.e), abs(hj.f),
                abs(hj.h), abs(hj.k), 1e-100)
    r = {
        "a": vals["a"] / scale,
        "b": vals["b"] / scale,
        "c": vals["c"] / scale,
        "cross": vals["cross"] / scale**2,
        "border1": vals["border1"] / scale**3,
        "border2": vals["border2"] / scale**3,
    }

    def zero(x):
        return x <= tol

    def gray(x):
        return tol < x < GRAY_FACTOR * tol

    report = lambda s: StratumReport(s, r, tol)
    if not zero(r["a"]):
        return report(StratumId.UNRESOLVED)
    linear = max(r["b"], r["c"])
    if zero(linear):
        return report(StratumId.W1)
    if gray(linear):
        return report(StratumId.UNRESOLVED)
    if zero(r["cross"]):
        border = max(r["border1"], r["border2"])
        if zero(border):
            return report(StratumId.W3)
        if gray(border):
            return report(StratumId.UNRESOLVED)
        return report(StratumId.W4)
    if gray(r["cross"]):
        return report(StratumId.UNRESOLVED)
    return report(StratumId.W5)


_FOLD_KINDS = {"Hyperbolic", "Elliptic", "DegenerateFold"}


def _consistent(stratum, sclass):
    kind = sclass.kind
    if stratum == StratumId.W5:
        return kind == "Regular"
    if stratum == StratumId.W4:
        return kind in _FOLD_KINDS
    if stratum == StratumId.W3:
        return kind == "Cusp"
    if stratum in (StratumId.W1, StratumId.UNRESOLVED):
        return kind == "Degenerate"
    return False


def stratum_vs_classifier_crosscheck(fd, zero, tol=None, stratum_tol=STRATUM_TOL):
    """Compare the stratum of a zero's jet with its singularity class.

    Expected correspondence: W5 regular, W4 fold classes, W3 cusp,
    W1/Unresolved degenerate.
    """
    if fd.dim != 2:
        raise ShapeError("strata are defined for planar jets")
    j = jet_from_series(zero.jet, basepoint=zero.location)
    report = classify_jet_2d(j, tol)
    hj = project_to_helmholtz_jet(j, tol=stratum_tol)
    stratum = stratum_membership(hj, stratum_tol).stratum
    ok = _consistent(stratum, report.sclass)
    return ConsistencyReport(zero.location, stratum, report.sclass, ok,
                             unresolved=stratum == StratumId.UNRESOLVED)


# -- Monte-Carlo genericity ----------------------------------------------------

@dataclass
class MonteCarloStats:
    rows: list
    class_counts: dict
    stratum_counts: dict
    n_samples: int
    n_zeros: int
    pencil_definite_count: int
    inconsistent_count: int
    unresolved_count: int

    def to_csv(self, path=None):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["sample", "zero", "x", "y", "class", "stratum",
                         "res_a", "res_cross", "res_border",
                         "pencil_definite", "consistent"])
        for row in self.rows:
            writer.writerow(row)
        text = buf.getvalue()
        if path is not None:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text)
        return text

    def to_json(self):
        return {"n_samples": self.n_samples, "n_zeros": self.n_zeros,
                "classes": dict(self.class_counts),
                "strata": dict(self.stratum_counts),
                "pencil_definite": self.pencil_definite_count,
                "inconsistent": self.inconsistent_count,
                "unresolved": self.unresolved_count}


def _mc_sample_2d(sample_idx, child, region, n_terms, tol, stratum_tol):
    fd = random_helmholtz_field(child, n_terms=n_terms, dim=2)
    zeros = scan_zeros_2d(fd, region)
    out = []
    for zero_idx, zero in enumerate(zeros):
        j = jet_from_series(zero.jet, basepoint=zero.location)
        report = classify_jet_2d(j, tol)
        try:
            sreport = stratum_membership(
                project_to_helmholtz_jet(j, tol=stratum_tol), stratum_tol)
            stratum = sreport.stratum
            res = sreport.residuals
        except NotHelmholtzJet:
            stratum = StratumId.UNRESOLVED
            res = {"a": math.nan, "cross": math.nan,
                   "border1": math.nan, "border2": math.nan}
        definite, _ = hessian_pencil_definite(j, tol)
        ok = _consistent(stratum, report.sclass)
        row = [sample_idx, zero_idx,
               repr(zero.location[0]), repr(zero.location[1]),
               report.sclass.label(), stratum.value,
               f"{res['a']:.3e}", f"{res['cross']:.3e}",
               f"{max(res['border1'], res['border2']):.3e}",
               int(definite), int(ok)]
        out.append((row, report.sclass.kind, stratum, definite, ok))
    return out


def monte_carlo_genericity(seed, n_samples, region=None, n_terms=8,
                           tol=None, stratum_tol=STRATUM_TOL, threads=None):
    """Scan seeded random planar Helmholtz fields, classify every zero and
    assign its stratum. Per-sample seeds are spawned deterministically from
    the master seed and results are merged in sample order, so the table is
    reproducible regardless of the thread count."""
    if n_samples < 1:
        raise ShapeError("n_samples must be positive")
    region = region or Region.cube(-3.0, 3.0, dim=2, res=101)
    tol = tol or ToleranceSet()
    children = np.random.SeedSequence(seed).spawn(n_samples)

    def job(idx):
        return _mc_sample_2d(idx, children[idx], region, n_terms, tol,
                             stratum_tol)

    if threads and threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_sample = list(pool.map(job, range(n_samples)))
    else:
        per_sample = [job(i) for i in range(n_samples)]

    rows = []
    class_counts, stratum_counts = {}, {}
    pencil_count = inconsistent = unresolved = 0
    for sample in per_sample:
        for row, kind, stratum, definite, ok in sample:
            rows.append(row)
            class_counts[kind] = class_counts.get(kind, 0) + 1
            stratum_counts[stratum.value] = (
                stratum_counts.get(stratum.value, 0) + 1)
            pencil_count += int(definite)
            if stratum == StratumId.UNRESOLVED:
                unresolved += 1
            elif not ok:
                inconsistent += 1
    return MonteCarloStats(rows, class_counts, stratum_counts, n_samples,
                           len(rows), pencil_count, inconsistent, unresolved)


def monte_carlo_genericity_3d(seed, n_samples, region=None, n_terms=8,
                              tol=None, vertex_stride=8):
    """Spatial analog: trace dislocation curves of random 3-D fields and
    classify jets at sampled curve vertices (strata are planar-only, so
    the stratum column stays empty)."""
    if n_samples < 1:
        raise ShapeError("n_samples must be positive")
    region = region or Region.cube(-2.0, 2.0, dim=3, res=41)
    tol = tol or ToleranceSet()
    children = np.random.SeedSequence(seed).spawn(n_samples)
    rows = []
    class_counts = {}
    n_zeros = 0
    pencil_count = 0
    for sample_idx, child in enumerate(children):
        fd = random_helmholtz_field(child, n_terms=n_terms, dim=3)
        curves = trace_dislocation_3d(fd, region)
        for curve_idx, curve in enumerate(curves):
            for vertex in curve.points[::vertex_stride]:
                n_zeros += 1
                s = eval_field_jet(fd, tuple(vertex), order=4)
                j = jet_from_series(s, basepoint=tuple(vertex))
                report = classify_jet_3d(j, tol)
                class_counts[report.sclass.kind] = (
                    class_counts.get(report.sclass.kind, 0) + 1)
                definite, _ = hessian_pencil_definite(j, tol)
                pencil_count += int(definite)
                rows.append([sample_idx, curve_idx] +
                            [repr(float(v)) for v in vertex] +
                            [report.sclass.label(), "", "", "", "",
                             int(definite), ""])
    return MonteCarloStats(rows, class_counts, {}, n_samples, n_zeros,
                           pencil_count, 0, 0)
