"""Numerical toolkit for classical and spherical Radon transforms:
harmonic analysis on S^2, Fourier multipliers of homogeneous extensions,
positive-definiteness and intersection-function certification, norm
comparison under transform domination, and counterexample construction.
"""

from .errors import (
    ArityError,
    BandwidthExceeded,
    CertificateRequired,
    ConstructionFailed,
    DecayTooSlow,
    DegenerateInput,
    DominationFails,
    ExprError,
    ExprSyntaxError,
    GridMismatch,
    GridTooCoarse,
    InputInvalid,
    InvalidGrid,
    NotApplicable,
    NotPositive,
    OutOfRange,
    RadoncompError,
    TailTooHeavy,
    UnknownIdentifier,
)
from .sphere import (
    HarmonicSpectrum,
    SphereGrid,
    SphericalFunction,
    analyze,
    build_grid,
    constant_function,
    evaluate_spectrum,
    grid_function,
    lp_norm_sphere,
    reverse_holder_check,
    synthesize,
)
from .multipliers import (
    PDCertificate,
    certify_pd_r1,
    fourier_homogeneous,
    funk_eigenvalue,
    multiplier,
    multiplier_table,
    spherical_parseval_check,
)
from .funk import (
    ComparisonReport,
    StarBody,
    construct_counterexample_spherical,
    intersection_body_of,
    section_measure,
    slicing_check,
    sradon_direct,
    sradon_map,
    sradon_spectral,
    verify_comparison_spherical,
)
from .radon3d import (
    CATALOG_NAMES,
    PAIRING_CONSTANT,
    RELATION_CONSTANT,
    IntersectionCertificate,
    RadialProfile,
    RayMeasure,
    SeparableFunction,
    Sinogram,
    catalog_entry,
    certify_intersection_function,
    classification_witness,
    dual_radon,
    fourier_1d,
    fourier_along_ray,
    intersection_function_of,
    inverse_fourier_1d,
    mollified_ball,
    radon_direct_point,
    radon_transform,
    separable_power,
    separable_radial,
    symmetric_nodes,
)
from .compare3d import (
    RnComparisonReport,
    construct_counterexample_radon,
    lp_norm_rn,
    sinogram_dominates,
    verify_comparison_radon,
)
from .exprlang import (
    angular_context,
    check_angular_even,
    evaluate,
    parse_expr,
    pretty_print,
    radial_context,
    sinogram_context,
)
from .config import ScenarioConfig, load_config
from .reports import emit_report, report_schema, validate_report

__version__ = "0.1.0"
