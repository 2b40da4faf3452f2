"""Equi-phase curves and bifurcation figure data.

A level set {arg psi = theta} is extracted as the half-branch of
Im(e^{-i theta} psi) = 0 with Re(e^{-i theta} psi) > 0; the rotated
imaginary part is smooth where arg is not, so plain marching squares
applies. Vertices get one Newton projection onto the level set and are
validated against the phase tolerance; vertices falling within half a
cell of a dislocation zero are clipped (the phase is undefined there).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from skimage import measure

from .catalog import catalog_get
from .dislocation import Region, scan_zeros_2d
from .errors import ShapeError
from .fieldlang import FieldDef, eval_field, eval_field_jet

TAU_PHASE = 1e-6
DEFAULT_LEVELS = 12
FIGURE_RES = 201


@dataclass
class PhaseContourSet:
    levels: list
    polylines: dict  # level index -> list of (n, 2) arrays
    region: Region
    params: dict
    zeros: list

    def polyline_count(self):
        return sum(len(v) for v in self.polylines.values())

    def to_csv_rows(self):
        """Rows of (level_rad, polyline_id, x, y); ids run per level set."""
        rows = []
        for li, level in enumerate(self.levels):
            for pid, line in enumerate(self.polylines[li]):
                for x, y in line:
                    rows.append((level, pid, float(x), float(y)))
        return rows


def default_levels(n=DEFAULT_LEVELS):
    return [2.0 * math.pi * i / n for i in range(n)]


def _split_on_mask(line, keep):
    """Split a polyline into maximal runs of kept vertices."""
    pieces = []
    start = None
    for i, flag in enumerate(keep):
        if flag and start is None:
            start = i
        elif not flag and start is not None:
            if i - start >= 2:
                pieces.append(line[start:i])
            start = None
    if start is not None and len(line) - start >= 2:
        pieces.append(line[start:])
    return pieces


def trace_equiphase(fd, region, levels, params=None, tau_phase=TAU_PHASE):
    """Equi-phase polylines for each phase level (planar fields)."""
    if fd.dim != 2:
        raise ShapeError("equi-phase tracing is planar")
    if region.dim != 2:
        raise ShapeError("need a planar region")
    levels = list(levels)
    if not levels:
        raise ShapeError("need at least one phase level")
    axes = region.axes()
    mesh = np.meshgrid(*axes, indexing="ij")
    vals = eval_field(fd, tuple(mesh), params)
    zeros = scan_zeros_2d(fd, region, params)
    zero_pts = np.array([z.location for z in zeros]) if zeros else None
    clip_radius = 0.5 * max(region.cell_sizes())
    x0, y0 = region.bounds[0][0], region.bounds[1][0]
    hx, hy = region.cell_sizes()

    polylines = {}
    for li, theta in enumerate(levels):
        rot = np.exp(-1j * theta) * vals
        out = []
        for contour in measure.find_contours(rot.imag, 0.0):
            line = np.column_stack([x0 + contour[:, 0] * hx,
                                    y0 + contour[:, 1] * hy])
            mids = 0.5 * (line[:-1] + line[1:])
            re_mid = np.real(np.exp(-1j * theta) * eval_field(
                fd, (mids[:, 0], mids[:, 1]), params))
            # vertex kept when an adjacent segment midpoint is on the
            # positive half-branch
            keep = np.zeros(len(line), dtype=bool)
            keep[:-1] |= re_mid > 0.0
            keep[1:] |= re_mid > 0.0
            if zero_pts is not None and len(zero_pts):
                dists = np.min(np.linalg.norm(
                    line[:, None, :] - zero_pts[None, :, :], axis=2), axis=1)
                keep &= dists > clip_radius
            for piece in _split_on_mask(line, keep):
                projected = _project_polyline(fd, piece, theta, params)
                checked = _validate_phase(fd, projected, theta, params,
                                          tau_phase)
                if len(checked) >= 2:
                    out.append(checked)
        polylines[li] = out
    return PhaseContourSet(levels, polylines, region, dict(params or {}),
                           zeros)


def _project_polyline(fd, line, theta, params):
    """One Newton step per vertex onto Im(e^{-i theta} psi) = 0."""
    jet = eval_field_jet(fd, (line[:, 0], line[:, 1]), params, order=1)
    rot = np.exp(-1j * theta)
    g = np.asarray(rot * jet.constant_term).imag
    gx = np.asarray(rot * jet.deriv((1, 0))).imag
    gy = np.asarray(rot * jet.deriv((0, 1))).imag
    norm2 = gx * gx + gy * gy
    safe = norm2 > 1e-300
    scale = np.where(safe, g / np.where(safe, norm2, 1.0), 0.0)
    return line - np.column_stack([scale * gx, scale * gy])


def _validate_phase(fd, line, theta, params, tau_phase):
    vals = np.asarray(eval_field(fd, (line[:, 0], line[:, 1]), params))
    err = np.abs(np.angle(vals * np.exp(-1j * theta)))
    return line[err < tau_phase]


# -- figure panels -------------------------------------------------------------

@dataclass
class PanelSpec:
    """One output file per parameter assignment in `param_grid`."""

    field: object  # FieldDef or catalog name
    param_grid: list  # list of dicts
    region: Region
    levels: list = field(default_factory=default_levels)
    out_dir: Path = Path(".")
    formats: tuple = ("csv",)

    def __post_init__(self):
        if len(self.param_grid) > 64:
            raise ShapeError("at most 64 panels per spec")
        if not set(self.formats) <= {"csv", "svg"}:
            raise ShapeError(f"unknown formats {self.formats}")

    def field_def(self):
        if isinstance(self.field, FieldDef):
            return self.field
        return catalog_get(self.field)


def _panel_stem(fd, params):
    parts = [fd.name.replace("/", "_")]
    for key in sorted(params):
        parts.append(f"{key}={params[key]:g}")
    return "_".join(parts)


def _write_csv(path, contours):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("level_rad,polyline_id,x,y\n")
        for level, pid, x, y in contours.to_csv_rows():
            fh.write(f"{level!r},{pid},{x!r},{y!r}\n")


def _write_zeros_csv(path, contours):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("x,y,residual\n")
        for z in contours.zeros:
            fh.write(f"{z.location[0]!r},{z.location[1]!r},{z.residual!r}\n")


def _svg_coords(region, size=480):
    (xlo, xhi), (ylo, yhi) = region.bounds
    span = max(xhi - xlo, yhi - ylo)
    def to_px(x, y):
        return ((x - xlo) / span * size, (yhi - y) / span * size)
    return to_px, size


def _write_svg(path, contours):
    to_px, size = _svg_coords(contours.region)
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" '
             f'height="{size}" viewBox="0 0 {size} {size}">']
    for li, level in enumerate(contours.levels):
        hue = int(360 * li / max(1, len(contours.levels)))
        for line in contours.polylines[li]:
            pts = " ".join("%.2f,%.2f" % to_px(x, y) for x, y in line)
            parts.append(f'<polyline points="{pts}" fill="none" '
                         f'stroke="hsl({hue},70%,45%)" stroke-width="1"/>')
    for z in contours.zeros:
        cx, cy = to_px(*z.location)
        parts.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="4" '
                     f'fill="black"/>')
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts) + "\n")


def render_panels(spec):
    """Render every panel; returns written paths (deterministic order).

    A manifest JSON next to the panels records parameters, zero counts and
    files per panel.
    """
    fd = spec.field_def()
    out_dir = Path(spec.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    manifest = []
    for params in spec.param_grid:
        contours = trace_equiphase(fd, spec.region, spec.levels, params)
        stem = _panel_stem(fd, params)
        files = []
        if "csv" in spec.formats:
            path = out_dir / f"{stem}.csv"
            _write_csv(path, contours)
            zpath = out_dir / f"{stem}_zeros.csv"
            _write_zeros_csv(zpath, contours)
            files += [path.name, zpath.name]
        if "svg" in spec.formats:
            path = out_dir / f"{stem}.svg"
            _write_svg(path, contours)
            files.append(path.name)
        written += [out_dir / name for name in files]
        manifest.append({"field": fd.name,
                         "params": {k: float(v) for k, v in params.items()},
                         "zero_count": len(contours.zeros),
                         "polylines": contours.polyline_count(),
                         "files": files})
    if spec.param_grid:
        mpath = out_dir / "panels.json"
        with open(mpath, "w", encoding="utf-8") as fh:
            json.dump({"panels": manifest}, fh, indent=2, sort_keys=True)
            fh.write("\n")
        written.append(mpath)
    return written
