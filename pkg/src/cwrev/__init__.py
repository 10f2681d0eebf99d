"""Constant-width bodies of revolution described by their support functions."""

from .errors import (
    ConfigError,
    ConvexityError,
    CwrevError,
    DomainError,
    FlowExitsConvexityError,
    InfeasibleBodyError,
    InfeasibleConfigurationError,
    InfeasibleMergeError,
    InfeasiblePerturbationError,
    ValidationError,
)
from .functionals import (
    MEISSNER_RATIO,
    REULEAUX_DEFICIT,
    REULEAUX_RATIO,
    FunctionalReport,
    analyze,
    blaschke_volume,
    deficit,
    deficit_bilinear,
    deficit_boundary_form,
    deficit_closed_form,
    deficit_quadrature,
    normal_flow,
    ratio,
    volume,
)
from .geometry import (
    Mesh,
    ProfileSample,
    curve_point,
    mesh_signed_volume,
    radius_of_curvature,
    surface_area,
    surface_point,
    tessellate,
    width_at,
)
from .profiles import (
    Body,
    PiecewiseTrigProfile,
    SineSeriesProfile,
    critical_half_width,
    evaluate,
    make_ball,
    reuleaux_profile,
    validate,
)
from .variational import (
    SearchResult,
    TripleParams,
    merge_deficit_change,
    merge_triple,
    middle_shift_slope,
    minimize,
    perturb_middle,
)

__version__ = "0.1.0"
