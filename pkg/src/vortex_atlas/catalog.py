"""Built-in catalog of example fields.

``H2.*`` entries are planar, ``H3.*`` spatial. Bifurcation families carry
real parameters (``t``, ``a``, ``b``, fold order ``m`` and ``sign``) with
default 0 resp. their listed defaults. Entries tagged ``helmholtz``
satisfy the k=1 Helmholtz equation; ``wave`` entries additionally satisfy
the c=1 wave equation in the time coordinate.
"""

from __future__ import annotations

from .errors import UnknownField
from .fieldlang import field_from_text


def _entry(name, text, dim=2, time=False, params=None, prov="", tags=()):
    return field_from_text(name, text, dim=dim, time_dependent=time,
                           params=params, provenance=prov, tags=tags)


_H_WAVE = "(cos(y) - cos(x) + i*sin(y))*cos(t) + cos(y)*sin(t)"
_CUSP_PSI = "x^3*cos(y) + (x - 3*x*y)*sin(y) + i*sin(y)"
_CUSP_WAVE = "(" + _CUSP_PSI + ")*cos(t) + i*cos(y)*sin(t)"

_ENTRIES = (
    _entry("H2.regular", "x + i*y",
           prov="planar normal form: regular zero"),
    _entry("H2.hyperbolic", "x^2 - y^2 + i*y",
           prov="planar normal form: hyperbolic fold zero"),
    _entry("H2.elliptic", "x^2 + y^2 + i*y",
           prov="planar normal form: elliptic fold zero"),
    _entry("H2.Ht", "x^2 - y^2 + t + i*y", time=True,
           prov="one-parameter unfolding of the hyperbolic zero"),
    _entry("H2.Et", "x^2 + y^2 + t + i*y", time=True,
           prov="one-parameter unfolding of the elliptic zero"),
    _entry("H2.foldm", "x^2 + sign*y^m + i*y",
           params={"m": 3.0, "sign": 1.0},
           prov="degenerate fold family with contact order m"),
    _entry("H2.cusp-normal", "x^3 + x*y + i*y",
           prov="planar normal form: cusp zero"),
    _entry("H2.cusp-family", "x^3 + x*y + b + i*(y + a)",
           params={"a": 0.0, "b": 0.0},
           prov="two-parameter unfolding of the cusp zero"),
    _entry("H2.helmholtz-hyperbolic", "cos(y) - cos(x) + i*sin(y)",
           prov="k=1 Helmholtz solution with a hyperbolic zero at the origin",
           tags=("helmholtz",)),
    _entry("H2.helmholtz-hyperbolic-wave", _H_WAVE, time=True,
           prov="k=1, c=1 monochromatic wave deforming the hyperbolic zero",
           tags=("helmholtz", "wave")),
    _entry("H2.helmholtz-cusp", _CUSP_PSI,
           prov="k=1 Helmholtz solution with a cusp zero at the origin",
           tags=("helmholtz",)),
    _entry("H2.helmholtz-cusp-wave", _CUSP_WAVE, time=True,
           prov="k=1, c=1 monochromatic wave deforming the cusp zero",
           tags=("helmholtz", "wave")),
    _entry("H2.helmholtz-hyperbolic-alt", "x^2*cos(y) - y*sin(y) + i*sin(y)",
           prov="alternative k=1 Helmholtz solution with a hyperbolic zero",
           tags=("helmholtz",)),
    _entry("H3.DH", "x^2 + y^2 - z^2 + i*z", dim=3,
           prov="spatial normal form: definite hyperbolic zero"),
    _entry("H3.DE", "x^2 + y^2 + z^2 + i*z", dim=3,
           prov="spatial normal form: definite elliptic zero"),
    _entry("H3.I", "x^2 - y^2 - z^2 + i*z", dim=3,
           prov="spatial normal form: indefinite zero"),
    _entry("H3.DHt", "x^2 + y^2 - z^2 + t + i*z", dim=3, time=True,
           prov="unfolding of the definite hyperbolic zero"),
    _entry("H3.DEt", "x^2 + y^2 + z^2 + t + i*z", dim=3, time=True,
           prov="unfolding of the definite elliptic zero"),
    _entry("H3.It", "x^2 - y^2 - z^2 + t + i*z", dim=3, time=True,
           prov="unfolding of the indefinite zero"),
    _entry("H3.cusp", "x^3 + x*y + z^2 + i*y", dim=3,
           prov="spatial normal form: cusp zero"),
    _entry("H3.helmholtz-DHt",
           "(-cos(x) - cos(y) + 2*cos(z) + i*sin(z))*cos(t) + cos(z)*sin(t)",
           dim=3, time=True,
           prov="k=1, c=1 wave with a definite hyperbolic zero at t=0",
           tags=("helmholtz", "wave")),
    _entry("H3.helmholtz-It",
           "(-2*cos(x) + cos(y) + cos(z) + i*sin(z))*cos(t) + cos(z)*sin(t)",
           dim=3, time=True,
           prov="k=1, c=1 wave with an indefinite zero at t=0",
           tags=("helmholtz", "wave")),
    _entry("H3.helmholtz-cusp",
           "x^3*cos(y) + (x - 3*x*y)*sin(y) - cos(y) + cos(z) + i*sin(y)",
           dim=3,
           prov="k=1 Helmholtz solution with a spatial cusp zero",
           tags=("helmholtz",)),
)

CATALOG = {fd.name: fd for fd in _ENTRIES}


def catalog_names():
    return tuple(CATALOG)


def catalog_get(name):
    try:
        return CATALOG[name]
    except KeyError:
        raise UnknownField(f"no catalog field named {name!r}") from None
