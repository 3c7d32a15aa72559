"""Milnor fibration toolkit for real polynomial map germs f = (P, Q).

Exact symbolic certificates (weight systems, Euler identities, the omega
field), numeric searches (critical points of f/||f|| on spheres, link and
fiber sampling), and the closed-form Euler-flow equivalence between the tube
and sphere fibrations.
"""

from .algebra import MapGerm, Polynomial, PolyVectorField, fg_conjugate_germ
from .critical import (
    CriticalSetResult,
    LinkSample,
    critical_points_on_sphere,
    gram_residual,
    link_points,
    parallel_residual,
    projection_jacobian,
    projection_jacobian_tangent_svals,
    tangential_residual,
)
from .errors import (
    DegenerateSampleError,
    GermFormatError,
    NotQuasiHomogeneousError,
    OnVarietyError,
)
from .fields import (
    IdentityCertificate,
    RankSampleReport,
    df_min_singular_sample,
    grad_norm_sq,
    identity_certificates,
    omega,
    omega_euler_certificate,
    tube_transversality_certificate,
)
from .flow import (
    EquivalenceReport,
    TubePoint,
    equivalence_report,
    euler_flow,
    sphere_fiber_sample,
    time_to_sphere,
    tube_fiber_sample,
    tube_to_sphere,
)
from .io import GermSpec, load_germ_file, parse_germ_spec, serialize_germ_spec
from .weights import (
    QHVerdict,
    WeightSystem,
    euler_field,
    euler_residual,
    germ_is_weighted_homogeneous,
    infer_weights,
    is_weighted_homogeneous,
)

__version__ = "0.1.0"

__all__ = [
    "CriticalSetResult",
    "DegenerateSampleError",
    "EquivalenceReport",
    "GermFormatError",
    "GermSpec",
    "IdentityCertificate",
    "LinkSample",
    "MapGerm",
    "NotQuasiHomogeneousError",
    "OnVarietyError",
    "Polynomial",
    "PolyVectorField",
    "QHVerdict",
    "RankSampleReport",
    "TubePoint",
    "WeightSystem",
    "critical_points_on_sphere",
    "df_min_singular_sample",
    "equivalence_report",
    "euler_field",
    "euler_flow",
    "euler_residual",
    "fg_conjugate_germ",
    "germ_is_weighted_homogeneous",
    "grad_norm_sq",
    "gram_residual",
    "identity_certificates",
    "infer_weights",
    "is_weighted_homogeneous",
    "link_points",
    "load_germ_file",
    "omega",
    "omega_euler_certificate",
    "parse_germ_spec",
    "parallel_residual",
    "projection_jacobian",
    "projection_jacobian_tangent_svals",
    "serialize_germ_spec",
    "sphere_fiber_sample",
    "tangential_residual",
    "time_to_sphere",
    "tube_fiber_sample",
    "tube_to_sphere",
    "tube_transversality_certificate",
]
