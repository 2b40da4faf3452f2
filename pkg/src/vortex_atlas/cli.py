"""Command-line interface.

Exit codes: 0 success, 2 usage error or unknown name, 3 degenerate result
under --strict, 4 precondition violation (e.g. the point is not a zero),
5 numeric failure. Every JSON document echoes the effective configuration
including all tolerances, so runs are reproducible from their output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace

from . import __version__, backend
from .catalog import catalog_get, catalog_names
from .classify import (
    ToleranceSet,
    classify_jet_2d,
    classify_jet_3d,
    jet_from_series,
)
from .dislocation import (
    Region,
    curves_to_json,
    scan_zeros_2d,
    sweep_parameter,
    trace_dislocation_3d,
    zeros_to_json,
)
from .errors import (
    NotOnDislocation,
    NumericError,
    UnknownField,
    VortexAtlasError,
)
from .fieldlang import eval_field_jet, load_field_file, parse_field, to_text
from .fieldlang import FieldDef
from .helmholtz import helmholtz_residual, wave_residual
from .phasefield import PanelSpec, default_levels, render_panels
from .strata import (
    monte_carlo_genericity,
    monte_carlo_genericity_3d,
    project_to_helmholtz_jet,
    stratum_membership,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_STRICT_DEGENERATE = 3
EXIT_PRECONDITION = 4
EXIT_NUMERIC = 5


def _read_config_file(path):
    """Flat key=value lines; '#' starts a comment."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, val = line.partition("=")
            if not sep:
                raise ValueError(f"bad config line {raw!r}")
            values[key.strip()] = val.strip()
    return values


def _apply_config_defaults(args, parser):
    if not getattr(args, "config", None):
        return args
    values = _read_config_file(args.config)
    for key, val in values.items():
        dest = key.replace("-", "_")
        if not hasattr(args, dest):
            continue
        # flags win over config-file values
        if _flag_given(parser, dest):
            continue
        current = getattr(args, dest)
        if isinstance(current, bool):
            setattr(args, dest, val.lower() in ("1", "true", "yes"))
        elif isinstance(current, int):
            setattr(args, dest, int(val))
        elif isinstance(current, float):
            setattr(args, dest, float(val))
        else:
            setattr(args, dest, val)
    return args


def _flag_given(parser, dest):
    return dest in parser.__dict__.setdefault("_explicit", set())


class _TrackingParser(argparse.ArgumentParser):
    """Records which destinations were set explicitly on the command line."""

    def parse_args(self, argv=None, namespace=None):
        ns = super().parse_args(argv, namespace)
        explicit = set()
        argv = sys.argv[1:] if argv is None else list(argv)
        for action in self._get_all_actions():
            for opt in action.option_strings:
                if any(a == opt or a.startswith(opt + "=") for a in argv):
                    explicit.add(action.dest)
        self.__dict__["_explicit"] = explicit
        return ns

    def _get_all_actions(self):
        actions = list(self._actions)
        for action in self._actions:
            if isinstance(action, argparse._SubParsersAction):
                for sub in action.choices.values():
                    actions.extend(sub._actions)
        return actions


def _parse_params(text):
    params = {}
    if text:
        for item in text.split(","):
            key, _, val = item.partition("=")
            params[key.strip()] = float(val)
    return params


def _parse_point(text):
    return tuple(float(v) for v in text.split(","))


def _parse_region(args, dim):
    if args.region:
        vals = [float(v) for v in args.region.split(",")]
        if len(vals) == 2:
            return Region.cube(vals[0], vals[1], dim=dim, res=args.res)
        if len(vals) != 2 * dim:
            raise ValueError(
                f"--region needs 2 or {2 * dim} comma-separated numbers")
        bounds = tuple((vals[2 * i], vals[2 * i + 1]) for i in range(dim))
        return Region(bounds, tuple(args.res for _ in range(dim)))
    return Region.cube(-1.0, 1.0, dim=dim, res=args.res)


def _load_field(args):
    spec = args.field
    if spec.startswith("expr:"):
        dim = getattr(args, "dim", 2) or 2
        expr = parse_field(spec[len("expr:"):])
        return FieldDef(name="inline", dim=dim,
                        time_dependent=getattr(args, "time", False),
                        expr=expr, params=_parse_params(getattr(args, "declare", "")))
    if spec.startswith("file:"):
        return load_field_file(spec[len("file:"):])
    if spec.startswith("pw:"):
        from .helmholtz import plane_waves_from_csv

        return plane_waves_from_csv(spec[len("pw:"):])
    if os.path.sep in spec or spec.endswith(".field"):
        return load_field_file(spec)
    return catalog_get(spec)


def _tolerances(args):
    tol = ToleranceSet()
    for name in ("rank", "fold", "curv", "grad", "hess", "zero"):
        flag = getattr(args, f"tol_{name}", None)
        if flag is not None:
            tol = replace(tol, **{name: flag})
    return tol


def _effective_config(args, tol, extra=None):
    config = {
        "command": args.command,
        "version": __version__,
        "backend": backend.backend_name(),
        "tolerances": tol.as_dict(),
    }
    for key in ("field", "seed", "threads", "res", "param", "values",
                "point", "params", "helmholtz", "wave", "n", "dim",
                "levels", "strict"):
        val = getattr(args, key, None)
        if val is not None:
            config[key] = val
    if extra:
        config.update(extra)
    return config


def _emit(args, document):
    text = json.dumps(document, indent=2, sort_keys=True)
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _classify_point(fd, point, params, tol):
    s = eval_field_jet(fd, point, params, order=6)
    j = jet_from_series(s, basepoint=point)
    if fd.dim == 2:
        return classify_jet_2d(j, tol)
    return classify_jet_3d(j, tol)


# -- subcommand bodies ---------------------------------------------------------


def cmd_catalog(args):
    if args.action == "list":
        if args.json:
            _emit(args, {"fields": [
                {"name": n, "dim": catalog_get(n).dim,
                 "time_dependent": catalog_get(n).time_dependent,
                 "provenance": catalog_get(n).provenance}
                for n in catalog_names()]})
        else:
            for name in catalog_names():
                fd = catalog_get(name)
                print(f"{name:36s} dim={fd.dim} "
                      f"{'wave ' if fd.time_dependent else ''}"
                      f"| {fd.provenance}")
        return EXIT_OK
    fd = catalog_get(args.name)
    if args.json:
        _emit(args, {"name": fd.name, "dim": fd.dim,
                     "time_dependent": fd.time_dependent,
                     "expression": to_text(fd.expr),
                     "params": fd.params,
                     "provenance": fd.provenance,
                     "tags": sorted(fd.tags)})
    else:
        print(to_text(fd.expr))
        if fd.params:
            print("params:", ", ".join(f"{k}={v}" for k, v in
                                       sorted(fd.params.items())))
        print("provenance:", fd.provenance)
    return EXIT_OK


def cmd_classify(args, parser):
    fd = _load_field(args)
    tol = _tolerances(args)
    params = _parse_params(args.params)
    if args.point is None and not args.auto:
        parser.error("classify needs --point or --auto")
    reports = []
    if args.auto:
        region = _parse_region(args, fd.dim)
        if fd.dim == 2:
            zeros = scan_zeros_2d(fd, region, params)
            for z in zeros:
                j = jet_from_series(z.jet, basepoint=z.location)
                reports.append(classify_jet_2d(j, tol))
        else:
            curves = trace_dislocation_3d(fd, region, params)
            for curve in curves:
                mid = tuple(float(v) for v in curve.points[len(curve.points) // 2])
                reports.append(_classify_point(fd, mid, params, tol))
    else:
        point = _parse_point(args.point)
        reports.append(_classify_point(fd, point, params, tol))
    config = _effective_config(args, tol)
    _emit(args, {"config": config,
                 "reports": [r.to_json() for r in reports]})
    if args.strict and any(r.sclass.kind == "Degenerate" for r in reports):
        return EXIT_STRICT_DEGENERATE
    return EXIT_OK


def cmd_scan(args):
    fd = _load_field(args)
    tol = _tolerances(args)
    params = _parse_params(args.params)
    region = _parse_region(args, 2)
    zeros = scan_zeros_2d(fd, region, params)
    _emit(args, zeros_to_json(
        zeros, region, {"config": _effective_config(args, tol)}))
    return EXIT_OK


def cmd_trace(args):
    fd = _load_field(args)
    tol = _tolerances(args)
    params = _parse_params(args.params)
    region = _parse_region(args, 3)
    curves = trace_dislocation_3d(fd, region, params)
    _emit(args, curves_to_json(
        curves, region, {"config": _effective_config(args, tol)}))
    return EXIT_OK


def cmd_sweep(args):
    fd = _load_field(args)
    tol = _tolerances(args)
    params = _parse_params(args.params)
    region = _parse_region(args, fd.dim)
    values = [float(v) for v in args.values.split(",")]
    result = sweep_parameter(fd, region, args.param, values, params)
    doc = result.to_json()
    doc["config"] = _effective_config(args, tol)
    _emit(args, doc)
    return EXIT_OK


def cmd_verify(args, parser):
    fd = _load_field(args)
    tol = _tolerances(args)
    params = _parse_params(args.params)
    region = _parse_region(args, fd.dim)
    if args.helmholtz is None and args.wave is None:
        parser.error("verify needs --helmholtz K or --wave C")
    documents = {}
    if args.helmholtz is not None:
        rep = helmholtz_residual(fd, region, args.helmholtz, params)
        documents["helmholtz"] = rep.to_json()
    if args.wave is not None:
        times = [float(v) for v in args.times.split(",")]
        rep = wave_residual(fd, region, times, args.wave, params)
        documents["wave"] = rep.to_json()
    documents["config"] = _effective_config(args, tol)
    _emit(args, documents)
    worst = max(d["residual"] for k, d in documents.items() if k != "config")
    return EXIT_OK if worst < args.residual_limit else EXIT_NUMERIC


def cmd_strata(args, parser):
    fd = _load_field(args)
    tol = _tolerances(args)
    params = _parse_params(args.params)
    results = []
    if args.auto:
        region = _parse_region(args, 2)
        zeros = scan_zeros_2d(fd, region, params)
        points = [z.location for z in zeros]
        jets = [z.jet for z in zeros]
    elif args.point is not None:
        points = [_parse_point(args.point)]
        jets = [eval_field_jet(fd, points[0], params, order=6)]
    else:
        parser.error("strata needs --point or --auto")
    for point, series in zip(points, jets):
        j = jet_from_series(series, basepoint=point)
        hj = project_to_helmholtz_jet(j)
        sreport = stratum_membership(hj)
        creport = classify_jet_2d(j, tol)
        doc = sreport.to_json()
        doc["location"] = [float(v) for v in point]
        doc["class"] = creport.sclass.label()
        results.append(doc)
    _emit(args, {"config": _effective_config(args, tol), "zeros": results})
    return EXIT_OK


def cmd_montecarlo(args):
    tol = _tolerances(args)
    if args.dim == 2:
        region = (Region.cube(-3.0, 3.0, dim=2, res=args.res)
                  if args.region is None else _parse_region(args, 2))
        stats = monte_carlo_genericity(args.seed, args.n, region,
                                       n_terms=args.terms, tol=tol,
                                       threads=args.threads)
    else:
        region = (Region.cube(-2.0, 2.0, dim=3, res=41)
                  if args.region is None else _parse_region(args, 3))
        stats = monte_carlo_genericity_3d(args.seed, args.n, region,
                                          n_terms=args.terms, tol=tol)
    csv_text = stats.to_csv(args.out)
    if args.out is None:
        sys.stdout.write(csv_text)
    summary = stats.to_json()
    summary["config"] = _effective_config(args, tol)
    if args.summary:
        with open(args.summary, "w", encoding="utf-8") as fh:
            json.dump(summary, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return EXIT_OK


def cmd_render(args):
    fd = _load_field(args)
    region = _parse_region(args, fd.dim)
    values = [float(v) for v in args.values.split(",")] if args.values else [None]
    if args.param and values[0] is not None:
        grid = [{args.param: v} for v in values]
    else:
        grid = [{}]
    levels = default_levels(args.levels)
    spec = PanelSpec(field=fd, param_grid=grid, region=region,
                     levels=levels, out_dir=args.out or ".",
                     formats=tuple(args.format.split(",")))
    written = render_panels(spec)
    for path in written:
        print(path)
    return EXIT_OK


# -- parser ------------------------------------------------------------------


def _add_common(sub, point=False, region_dim=True):
    sub.add_argument("--field", required=True,
                     help="catalog name, expr:<text>, file:<path>")
    sub.add_argument("--params", default="",
                     help="comma-separated name=value overrides")
    sub.add_argument("--region", default=None,
                     help="lo,hi or per-axis lo,hi pairs")
    sub.add_argument("--res", type=int, default=101,
                     help="grid resolution per axis")
    sub.add_argument("--out", default=None, help="write output to a file")
    sub.add_argument("--config", default=None,
                     help="flat key=value config file (flags win)")
    for name in ("rank", "fold", "curv", "grad", "hess", "zero"):
        sub.add_argument(f"--tol-{name}", type=float, default=None,
                         dest=f"tol_{name}")
    if point:
        sub.add_argument("--point", default=None,
                         help="comma-separated coordinates")
        sub.add_argument("--auto", action="store_true",
                         help="scan the region and process every zero")


def build_parser():
    parser = _TrackingParser(prog="vortex-atlas",
                             description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--threads", type=int,
                        default=int(os.environ.get("VORTEX_ATLAS_THREADS", "0"))
                        or None,
                        help="parallelism cap (default: VORTEX_ATLAS_THREADS)")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("catalog", help="list or show built-in fields")
    p.add_argument("action", choices=("list", "show"))
    p.add_argument("name", nargs="?")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", default=None)

    p = subs.add_parser("classify", help="classify phase singularities")
    _add_common(p, point=True)
    p.add_argument("--strict", action="store_true",
                   help="exit 3 when any zero classifies Degenerate")

    p = subs.add_parser("scan", help="find planar dislocation points")
    _add_common(p)

    p = subs.add_parser("trace", help="trace spatial dislocation curves")
    _add_common(p)

    p = subs.add_parser("sweep", help="zero sets across a parameter")
    _add_common(p)
    p.add_argument("--param", required=True)
    p.add_argument("--values", required=True,
                   help="comma-separated parameter values")

    p = subs.add_parser("verify", help="Helmholtz / wave residuals")
    _add_common(p)
    p.add_argument("--helmholtz", type=float, default=None, metavar="K")
    p.add_argument("--wave", type=float, default=None, metavar="C")
    p.add_argument("--times", default="0.0,0.5,1.0")
    p.add_argument("--residual-limit", type=float, default=1e-10,
                   dest="residual_limit")

    p = subs.add_parser("strata", help="Helmholtz jet strata of zeros")
    _add_common(p, point=True)

    p = subs.add_parser("montecarlo", help="random-field genericity table")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dim", type=int, choices=(2, 3), default=2)
    p.add_argument("--terms", type=int, default=8)
    p.add_argument("--region", default=None)
    p.add_argument("--res", type=int, default=101)
    p.add_argument("--out", default=None, help="CSV path (default stdout)")
    p.add_argument("--summary", default=None, help="JSON summary path")
    p.add_argument("--config", default=None)
    for name in ("rank", "fold", "curv", "grad", "hess", "zero"):
        p.add_argument(f"--tol-{name}", type=float, default=None,
                       dest=f"tol_{name}")

    p = subs.add_parser("render", help="equi-phase figure panels")
    _add_common(p)
    p.set_defaults(res=201)
    p.add_argument("--param", default=None)
    p.add_argument("--values", default=None)
    p.add_argument("--levels", type=int, default=12)
    p.add_argument("--format", default="csv", help="csv, svg or csv,svg")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args = _apply_config_defaults(args, parser)
        if args.command == "catalog":
            return cmd_catalog(args)
        if args.command == "classify":
            return cmd_classify(args, parser)
        if args.command == "scan":
            return cmd_scan(args)
        if args.command == "trace":
            return cmd_trace(args)
        if args.command == "sweep":
            return cmd_sweep(args)
        if args.command == "verify":
            return cmd_verify(args, parser)
        if args.command == "strata":
            return cmd_strata(args, parser)
        if args.command == "montecarlo":
            return cmd_montecarlo(args)
        if args.command == "render":
            return cmd_render(args)
        parser.error(f"unknown command {args.command!r}")
    except (UnknownField,) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NotOnDislocation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except NumericError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except VortexAtlasError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
