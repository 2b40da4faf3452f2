"""vortex-atlas: dislocation zeros and phase-singularity classification
for complex scalar waves in two and three dimensions.

The package locates the zero set of a complex field (isolated points in
the plane, curves in space), classifies the phase singularity at each zero
from its truncated Taylor jet, verifies and constructs solutions of the
Helmholtz and wave equations, stratifies Helmholtz 3-jets, and traces
equi-phase contours for bifurcation figures. A compiled kernel accelerates
the series product when available; set VORTEX_ATLAS_PURE=1 to force the
NumPy fallback.
"""

from .backend import backend_name
from .catalog import catalog_get, catalog_names
from .classify import (
    ClassificationReport,
    Jet2,
    Jet3,
    SingularityClass,
    ToleranceSet,
    classify_at,
    classify_jet_2d,
    classify_jet_3d,
    classify_phase_critical,
    contact_order,
    jet_from_series,
)
from .dislocation import (
    DislocationCurve,
    DislocationPoint,
    Region,
    SweepResult,
    refine_zero,
    scan_zeros_2d,
    sweep_parameter,
    trace_dislocation_3d,
)
from .fieldlang import (
    FieldDef,
    RadialTransform,
    compose_radial,
    eval_field,
    eval_field_jet,
    field_from_text,
    load_field_file,
    parse_field,
    save_field_file,
    to_text,
)
from .helmholtz import (
    CauchyData,
    PlaneWaveSum,
    ResidualReport,
    helmholtz_residual,
    helmholtz_series_from_cauchy,
    hessian_pencil_definite,
    monochromatic_wave,
    plane_waves_from_csv,
    plane_waves_to_csv,
    random_helmholtz_field,
    rescale_wave,
    wave_residual,
)
from .phasefield import PanelSpec, PhaseContourSet, render_panels, trace_equiphase
from .strata import (
    HelmholtzJet3,
    StratumId,
    monte_carlo_genericity,
    monte_carlo_genericity_3d,
    project_to_helmholtz_jet,
    stratum_membership,
    stratum_vs_classifier_crosscheck,
)
from .taylor import TruncatedSeries, seed_variable, series_add, series_elementary, series_mul

__version__ = "0.1.0"

__all__ = [
    "CauchyData",
    "ClassificationReport",
    "DislocationCurve",
    "DislocationPoint",
    "FieldDef",
    "HelmholtzJet3",
    "Jet2",
    "Jet3",
    "PanelSpec",
    "PhaseContourSet",
    "PlaneWaveSum",
    "RadialTransform",
    "Region",
    "ResidualReport",
    "SingularityClass",
    "StratumId",
    "SweepResult",
    "ToleranceSet",
    "TruncatedSeries",
    "backend_name",
    "catalog_get",
    "catalog_names",
    "classify_at",
    "classify_jet_2d",
    "classify_jet_3d",
    "classify_phase_critical",
    "compose_radial",
    "contact_order",
    "eval_field",
    "eval_field_jet",
    "field_from_text",
    "helmholtz_residual",
    "helmholtz_series_from_cauchy",
    "hessian_pencil_definite",
    "jet_from_series",
    "load_field_file",
    "monochromatic_wave",
    "monte_carlo_genericity",
    "monte_carlo_genericity_3d",
    "parse_field",
    "plane_waves_from_csv",
    "plane_waves_to_csv",
    "project_to_helmholtz_jet",
    "random_helmholtz_field",
    "refine_zero",
    "render_panels",
    "rescale_wave",
    "save_field_file",
    "scan_zeros_2d",
    "seed_variable",
    "series_add",
    "series_elementary",
    "series_mul",
    "stratum_membership",
    "stratum_vs_classifier_crosscheck",
    "sweep_parameter",
    "to_text",
    "trace_dislocation_3d",
    "trace_equiphase",
    "wave_residual",
    "__version__",
]
