"""Locating dislocation zeros: isolated points in 2-D, curves in 3-D.

Scanning works on a rectangular grid: cells where both the real and the
imaginary part change sign are Newton-refined, and grid minima of |psi|^2
seed extra Newton runs so tangential zeros are not missed (the sign filter
alone can skip them). Degenerate zeros (rank-deficient Jacobian) are kept
and handed to the classifier rather than discarded.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .errors import EvalError, NoConvergence, ShapeError, SingularJacobian
from .fieldlang import eval_field, eval_field_jet

log = logging.getLogger(__name__)

TAU_ZERO_REL = 1e-10
TAU_MERGE_REL = 1e-6
NEWTON_MAX_ITERS = 25
# final singular-value ratio below which a refined point is treated as a
# degenerate zero (wide dedup radius, classifier decides the rest)
DEGENERATE_RATIO = 1e-3
# |psi| minima above this fraction of the field scale are not worth a
# Newton run; true zeros missed by the sign filter sit far below it
MINIMA_LEVEL = 0.05


@dataclass(frozen=True)
class Region:
    """Axis-aligned box with per-axis sampling resolution."""

    bounds: tuple
    res: tuple

    def __post_init__(self):
        if len(self.bounds) not in (2, 3):
            raise ShapeError("regions are 2- or 3-dimensional")
        if len(self.res) != len(self.bounds):
            raise ShapeError("one resolution per axis required")
        for (lo, hi), r in zip(self.bounds, self.res):
            if not lo < hi:
                raise ShapeError(f"empty axis interval [{lo}, {hi}]")
            if r < 2:
                raise ShapeError("resolution must be at least 2")

    @classmethod
    def cube(cls, lo, hi, dim=2, res=101):
        return cls(tuple((float(lo), float(hi)) for _ in range(dim)),
                   tuple(int(res) for _ in range(dim)))

    @property
    def dim(self):
        return len(self.bounds)

    def axes(self):
        return [np.linspace(lo, hi, r)
                for (lo, hi), r in zip(self.bounds, self.res)]

    def cell_sizes(self):
        return tuple((hi - lo) / (r - 1)
                     for (lo, hi), r in zip(self.bounds, self.res))

    def cell_diagonal(self):
        return math.sqrt(sum(h * h for h in self.cell_sizes()))

    def contains(self, point, margin_cells=1.0):
        for v, (lo, hi), h in zip(point, self.bounds, self.cell_sizes()):
            pad = margin_cells * h
            if not (lo - pad <= v <= hi + pad):
                return False
        return True

    def to_json(self):
        return {"bounds": [list(b) for b in self.bounds],
                "res": list(self.res)}


@dataclass
class DislocationPoint:
    location: tuple
    residual: float
    newton_iters: int
    jet: object
    degenerate: bool = False

    def to_json(self):
        return {"location": [float(v) for v in self.location],
                "residual": self.residual,
                "newton_iters": self.newton_iters,
                "degenerate": self.degenerate}


@dataclass
class DislocationCurve:
    points: np.ndarray
    closed: bool
    max_residual: float
    boundary_open: bool = False
    degenerate_point: bool = False

    def to_json(self):
        return {"points": [[float(v) for v in p] for p in self.points],
                "closed": self.closed,
                "residual": self.max_residual,
                "boundary_open": self.boundary_open,
                "degenerate_point": self.degenerate_point}


@dataclass
class SweepResult:
    param: str
    values: list
    zero_sets: list
    counts: list
    events: list  # ((v0, v1), count_before, count_after)

    def to_json(self):
        return {"param": self.param,
                "values": [float(v) for v in self.values],
                "counts": list(self.counts),
                "events": [{"bracket": [float(a), float(b)],
                            "before": nb, "after": na}
                           for (a, b), nb, na in self.events]}


# -- Newton refinement --------------------------------------------------

def _value_and_jacobian(fd, point, params):
    s = eval_field_jet(fd, point, params, order=1)
    grad = [complex(s.deriv(tuple(1 if ax == i else 0
                                  for ax in range(fd.dim))))
            for i in range(fd.dim)]
    value = complex(s.constant_term)
    J = np.array([[g.real for g in grad], [g.imag for g in grad]])
    return value, J


def _newton_polish(fd, guess, params, tau_zero):
    """Damped Newton / least-squares iteration toward |psi| = 0.

    Aims a few orders below tau_zero (so jets taken at the result satisfy
    any downstream zero check), accepting tau_zero itself when the budget
    runs out. Returns (point, iters, residual, min_ratio) where min_ratio
    is the singular-value ratio of the Jacobian at the accepted point;
    raises NoConvergence when the tolerance is not reached.
    """
    point = np.asarray(guess, dtype=float)
    value, J = _value_and_jacobian(fd, point, params)
    residual = abs(value)
    target = tau_zero * 1e-4
    for it in range(1, NEWTON_MAX_ITERS + 1):
        if residual < target:
            sig = np.linalg.svd(J, compute_uv=False)
            ratio = sig[-1] / sig[0] if sig[0] > 0 else 0.0
            return point, it - 1, residual, ratio
        rhs = np.array([value.real, value.imag])
        sig = np.linalg.svd(J, compute_uv=False)
        if fd.dim == 2 and sig[0] > 0 and sig[-1] / sig[0] > 1e-12:
            step = np.linalg.solve(J, -rhs)
        else:
            step = np.linalg.lstsq(J, -rhs, rcond=None)[0]
        # backtracking keeps degenerate roots from overshooting
        for _ in range(8):
            trial = point + step
            try:
                tvalue, tJ = _value_and_jacobian(fd, trial, params)
            except EvalError:
                step = step / 2.0
                continue
            if abs(tvalue) < residual or np.linalg.norm(step) < 1e-15:
                break
            step = step / 2.0
        else:
            raise NoConvergence(f"stalled at {tuple(point)}")
        point, value, J, residual = trial, tvalue, tJ, abs(tvalue)
    if residual < tau_zero:
        sig = np.linalg.svd(J, compute_uv=False)
        ratio = sig[-1] / sig[0] if sig[0] > 0 else 0.0
        return point, NEWTON_MAX_ITERS, residual, ratio
    raise NoConvergence(
        f"residual {residual:.3g} after {NEWTON_MAX_ITERS} iterations")


def refine_zero(fd, guess, params=None, tau_zero=None, rank_tol=1e-7,
                jet_order=6):
    """Newton-refine a guess to a dislocation point.

    Raises SingularJacobian as soon as an iterate has a rank-deficient
    Jacobian (the point may be a degenerate zero; classify its jet
    instead), and NoConvergence past the iteration budget.
    """
    if tau_zero is None:
        tau_zero = TAU_ZERO_REL * (1.0 + abs(eval_field(fd, guess, params)))
    point = np.asarray(guess, dtype=float)
    for it in range(NEWTON_MAX_ITERS + 1):
        value, J = _value_and_jacobian(fd, point, params)
        sig = np.linalg.svd(J, compute_uv=False)
        if sig[0] == 0.0 or sig[-1] / sig[0] <= rank_tol:
            raise SingularJacobian(
                f"singular-value ratio {0 if sig[0] == 0 else sig[-1]/sig[0]:.3g} "
                f"at {tuple(point)}")
        if abs(value) < tau_zero:
            jet = eval_field_jet(fd, tuple(point), params, order=jet_order)
            return DislocationPoint(tuple(point), abs(value), it, jet)
        rhs = np.array([value.real, value.imag])
        if fd.dim == 2:
            step = np.linalg.solve(J, -rhs)
        else:
            step = np.linalg.lstsq(J, -rhs, rcond=None)[0]
        point = point + step
    raise NoConvergence(f"no convergence from {tuple(guess)}")


# -- grid scanning --------------------------------------------------------

def _grid_values(fd, region, params):
    axes = region.axes()
    mesh = np.meshgrid(*axes, indexing="ij")
    return axes, eval_field(fd, tuple(mesh), params)


def _sign_change_cells_2d(vals):
    u, w = vals.real, vals.imag
    def straddles(q):
        corners = np.stack([q[:-1, :-1], q[1:, :-1], q[:-1, 1:], q[1:, 1:]])
        return (corners.min(axis=0) <= 0.0) & (corners.max(axis=0) >= 0.0)
    return straddles(u) & straddles(w)


def _local_minima(mag):
    """Interior strict-or-equal local minima of a magnitude grid."""
    padded = np.pad(mag, 1, constant_values=np.inf)
    best = np.full_like(mag, np.inf)
    dim = mag.ndim
    for offset in np.ndindex(*(3,) * dim):
        if all(o == 1 for o in offset):
            continue
        sl = tuple(slice(o, o + n) for o, n in zip(offset, mag.shape))
        np.minimum(best, padded[sl], out=best)
    return mag <= best


def _merge_points(entries, tight, wide):
    """Union-find clustering: degenerate-suspect pairs merge at the wide
    radius, everything else at the tight radius."""
    n = len(entries)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            radius = wide if (entries[i][2] or entries[j][2]) else tight
            d = math.dist(entries[i][0], entries[j][0])
            if d < radius:
                parent[find(i)] = find(j)
    clusters = {}
    for i in range(n):
        clusters.setdefault(find(i), []).append(entries[i])
    merged = []
    for members in clusters.values():
        members.sort(key=lambda e: e[1])
        best = members[0]
        merged.append((best[0], best[1], any(m[2] for m in members), best[3]))
    return merged


def scan_zeros_2d(fd, region, params=None, tau_zero=None, jet_order=6):
    """All dislocation points of a planar field inside a region."""
    if fd.dim != 2:
        raise ShapeError("scan_zeros_2d needs a planar field")
    axes, vals = _grid_values(fd, region, params)
    sup = float(np.max(np.abs(vals)))
    if tau_zero is None:
        tau_zero = TAU_ZERO_REL * (1.0 + sup)

    cells = np.argwhere(_sign_change_cells_2d(vals))
    hx, hy = region.cell_sizes()
    seeds = [(axes[0][i] + hx / 2.0, axes[1][j] + hy / 2.0)
             for i, j in cells]
    mag = np.abs(vals)
    minima = np.argwhere(_local_minima(mag) & (mag < MINIMA_LEVEL * (1.0 + sup)))
    seeds += [(axes[0][i], axes[1][j]) for i, j in minima]

    entries = []
    failures = 0
    for seed in seeds:
        try:
            point, iters, residual, ratio = _newton_polish(
                fd, seed, params, tau_zero)
        except (NoConvergence, EvalError):
            failures += 1
            continue
        if not region.contains(point):
            continue
        entries.append((tuple(float(v) for v in point), residual,
                        ratio < DEGENERATE_RATIO, iters))
    if failures:
        log.warning("scan of %s: %d seed(s) did not converge (dropped)",
                    fd.name, failures)

    diag = region.cell_diagonal()
    merged = _merge_points(entries, tight=TAU_MERGE_REL * diag,
                           wide=0.5 * diag)
    merged.sort(key=lambda e: e[0])
    points = []
    for loc, residual, degen, iters in merged:
        jet = eval_field_jet(fd, loc, params, order=jet_order)
        points.append(DislocationPoint(loc, residual, iters, jet,
                                       degenerate=degen))
    return points


# -- 3-D curve tracing ------------------------------------------------------

_UNIT_CUBE = np.array(list(np.ndindex(2, 2, 2)))


def _kuhn_tets():
    """Six tetrahedra per cube, consistent across shared faces."""
    tets = []
    for perm in permutations(range(3)):
        corner = np.zeros(3, dtype=int)
        verts = [corner.copy()]
        for axis in perm:
            corner = corner.copy()
            corner[axis] = 1
            verts.append(corner)
        tets.append(np.array(verts))
    return tets


_TETS = _kuhn_tets()


def _segment_in_tet(coords, uvals, wvals):
    """Intersection segment of the two linear level sets within one tet."""
    A = np.hstack([coords, np.ones((4, 1))])
    try:
        cu = np.linalg.solve(A, uvals)
        cw = np.linalg.solve(A, wvals)
    except np.linalg.LinAlgError:
        return None
    gu, bu = cu[:3], cu[3]
    gw, bw = cw[:3], cw[3]
    direction = np.cross(gu, gw)
    norm = np.linalg.norm(direction)
    if norm < 1e-14 * (np.linalg.norm(gu) * np.linalg.norm(gw) + 1e-300):
        return None
    direction = direction / norm
    M = np.vstack([gu, gw])
    p0 = np.linalg.lstsq(M, -np.array([bu, bw]), rcond=None)[0]
    # clip to the tet via barycentric coordinates
    T = (coords[:3] - coords[3]).T
    try:
        Tinv = np.linalg.inv(T)
    except np.linalg.LinAlgError:
        return None
    lam_p = Tinv @ (p0 - coords[3])
    lam_d = Tinv @ direction
    lams_p = np.append(lam_p, 1.0 - lam_p.sum())
    lams_d = np.append(lam_d, -lam_d.sum())
    t_lo, t_hi = -np.inf, np.inf
    for lp, ld in zip(lams_p, lams_d):
        if abs(ld) < 1e-15:
            if lp < -1e-12:
                return None
            continue
        bound = -lp / ld
        if ld > 0:
            t_lo = max(t_lo, bound)
        else:
            t_hi = min(t_hi, bound)
    if not t_lo < t_hi - 1e-14:
        return None
    return p0 + t_lo * direction, p0 + t_hi * direction


def _project_vertices(fd, points, params, tau_zero):
    """Newton-project curve vertices onto the zero set, each step within
    the plane normal to the local curve direction. One batched jet
    evaluation serves all still-active vertices per sweep."""
    pts = np.array(points, dtype=float)
    n = len(pts)
    residuals = np.full(n, np.inf)
    target = tau_zero * 1e-4
    units = [tuple(1 if ax == i else 0 for ax in range(3)) for i in range(3)]
    for _ in range(12):
        cols = tuple(pts[:, ax] for ax in range(3))
        jet = eval_field_jet(fd, cols, params, order=1)
        vals = np.asarray(jet.constant_term)
        grads = [np.asarray(jet.deriv(e)) for e in units]
        residuals = np.abs(vals)
        active = np.nonzero(residuals >= target)[0]
        if active.size == 0:
            break
        moved = False
        for i in active:
            J = np.array([[g[i].real for g in grads],
                          [g[i].imag for g in grads]])
            _, _, Vt = np.linalg.svd(J)
            n1, n2 = Vt[0], Vt[1]
            A = np.column_stack([J @ n1, J @ n2])
            try:
                delta = np.linalg.solve(
                    A, -np.array([vals[i].real, vals[i].imag]))
            except np.linalg.LinAlgError:
                continue
            pts[i] = pts[i] + delta[0] * n1 + delta[1] * n2
            moved = True
        if not moved:
            break
    cols = tuple(pts[:, ax] for ax in range(3))
    residuals = np.abs(np.asarray(eval_field(fd, cols, params)))
    return pts, residuals


def trace_dislocation_3d(fd, region, params=None, tau_zero=None):
    """Dislocation curves of a spatial field, chained per-cell segments.

    Each candidate cell is split into six tetrahedra; in each, the zero
    segment of the pair of linear interpolants is extracted and clipped.
    Vertices are Newton-projected onto the zero set afterwards. Isolated
    (point) zeros away from any curve are reported as zero-length curves
    with ``degenerate_point`` set.
    """
    if fd.dim != 3:
        raise ShapeError("trace_dislocation_3d needs a spatial field")
    axes, vals = _grid_values(fd, region, params)
    sup = float(np.max(np.abs(vals)))
    if tau_zero is None:
        tau_zero = TAU_ZERO_REL * (1.0 + sup)
    # consistent symbolic perturbation: a zero set lying exactly on a grid
    # plane would otherwise emit duplicate face segments and sliver
    # junctions; the bias is removed by the Newton projection below
    eps = 1e-8 * (1.0 + sup)
    u = np.where(np.abs(vals.real) < eps, eps, vals.real)
    w = np.where(np.abs(vals.imag) < eps, eps, vals.imag)

    def straddles(q):
        stacked = np.stack([q[s0, s1, s2]
                            for s0 in (slice(None, -1), slice(1, None))
                            for s1 in (slice(None, -1), slice(1, None))
                            for s2 in (slice(None, -1), slice(1, None))])
        return (stacked.min(axis=0) <= 0.0) & (stacked.max(axis=0) >= 0.0)

    cells = np.argwhere(straddles(u) & straddles(w))
    segments = []
    for idx in cells:
        corner_idx = idx[None, :] + _UNIT_CUBE
        coords = np.stack([axes[ax][corner_idx[:, ax]] for ax in range(3)],
                          axis=1)
        cu = u[tuple(corner_idx.T)]
        cw = w[tuple(corner_idx.T)]
        local = {tuple(c): k for k, c in enumerate(_UNIT_CUBE)}
        for tet in _TETS:
            rows = [local[tuple(v)] for v in tet]
            seg = _segment_in_tet(coords[rows], cu[rows], cw[rows])
            if seg is not None and np.linalg.norm(seg[1] - seg[0]) > 1e-12:
                segments.append(seg)

    snap = max(1e-9, 1e-7 * region.cell_diagonal())
    def key(p):
        return tuple(int(round(v / snap)) for v in p)

    unique, seen = [], set()
    for p, q in segments:
        kp, kq = key(p), key(q)
        if kp == kq:
            continue  # below chaining resolution
        sig = frozenset((kp, kq))
        if sig not in seen:
            seen.add(sig)
            unique.append((p, q))
    segments = unique

    adjacency = {}
    for si, (p, q) in enumerate(segments):
        adjacency.setdefault(key(p), []).append((si, 0))
        adjacency.setdefault(key(q), []).append((si, 1))

    used = [False] * len(segments)

    def walk(start_si, start_end):
        chain = [segments[start_si][start_end],
                 segments[start_si][1 - start_end]]
        used[start_si] = True
        while True:
            k = key(chain[-1])
            next_hop = None
            for si, end in adjacency.get(k, ()):
                if not used[si]:
                    next_hop = (si, end)
                    break
            if next_hop is None:
                return chain
            si, end = next_hop
            used[si] = True
            chain.append(segments[si][1 - end])
            if key(chain[-1]) == key(chain[0]):
                return chain

    chains = []
    # open chains first (start at degree-1 endpoints), then cycles
    for k, incidences in sorted(adjacency.items()):
        if len(incidences) != 1:
            continue
        si, end = incidences[0]
        if not used[si]:
            chains.append(walk(si, end))
    for si in range(len(segments)):
        if not used[si]:
            chains.append(walk(si, 0))

    curves = []
    for chain in chains:
        closed = key(chain[0]) == key(chain[-1]) and len(chain) > 2
        raw = chain[:-1] if closed else chain
        pts, residuals = _project_vertices(fd, raw, params, tau_zero)
        max_res = float(residuals.max()) if len(residuals) else 0.0
        if closed:
            pts = np.vstack([pts, pts[0]])
        boundary_open = not closed and (
            not region.contains(pts[0], margin_cells=1.5)
            or not region.contains(pts[-1], margin_cells=1.5)
            or _near_boundary(region, pts[0]) or _near_boundary(region, pts[-1]))
        curves.append(DislocationCurve(pts, closed, max_res,
                                       boundary_open=boundary_open))

    # isolated point zeros: grid minima that polish to residual < tau_zero
    mag = np.abs(vals)
    minima = np.argwhere(_local_minima(mag) & (mag < MINIMA_LEVEL * (1.0 + sup)))
    vertex_cloud = np.vstack([c.points for c in curves]) if curves else None
    diag = region.cell_diagonal()
    found = []
    for ijk in minima:
        seed = tuple(axes[ax][ijk[ax]] for ax in range(3))
        try:
            point, _, residual, _ = _newton_polish(fd, seed, params, tau_zero)
        except (NoConvergence, EvalError):
            continue
        if not region.contains(point):
            continue
        if vertex_cloud is not None and np.min(
                np.linalg.norm(vertex_cloud - point, axis=1)) < diag:
            continue
        if any(math.dist(point, p) < 0.5 * diag for p, _ in found):
            continue
        found.append((tuple(point), residual))
    for point, residual in sorted(found):
        curves.append(DislocationCurve(np.array([point]), False, residual,
                                       degenerate_point=True))

    curves.sort(key=lambda c: tuple(c.points[0]))
    return curves


def _near_boundary(region, point, factor=1.5):
    for v, (lo, hi), h in zip(point, region.bounds, region.cell_sizes()):
        if v - lo < factor * h or hi - v < factor * h:
            return True
    return False


# -- parameter sweeps ---------------------------------------------------------

def sweep_parameter(fd, region, param, values, params=None):
    """Zero sets across ordered parameter values, with count-change events."""
    if param not in fd.params and not (param == "t" and fd.time_dependent):
        raise EvalError(f"parameter {param!r} not declared on {fd.name!r}")
    base = dict(params or {})
    zero_sets, counts = [], []
    for value in values:
        run = dict(base)
        run[param] = float(value)
        if fd.dim == 2:
            zs = scan_zeros_2d(fd, region, run)
        else:
            zs = trace_dislocation_3d(fd, region, run)
        zero_sets.append(zs)
        counts.append(len(zs))
    events = []
    for i in range(1, len(values)):
        if counts[i] != counts[i - 1]:
            events.append(((float(values[i - 1]), float(values[i])),
                           counts[i - 1], counts[i]))
    return SweepResult(param, list(values), zero_sets, counts, events)


# -- serialization -------------------------------------------------------------

def zeros_to_json(points, region=None, extra=None):
    out = {"points": [p.to_json() for p in points]}
    if region is not None:
        out["region"] = region.to_json()
    if extra:
        out.update(extra)
    return out


def curves_to_json(curves, region=None, extra=None):
    out = {"curves": [c.to_json() for c in curves]}
    if region is not None:
        out["region"] = region.to_json()
    if extra:
        out.update(extra)
    return out
