"""Exact four-point certification for finite metric spaces.

Computes sharp defects for the Ptolemy, PT_kappa, asymptotic PT_kappa,
Gromov four-point and asymptotic comparison inequalities by exhaustive
quadruple scans, and builds the hyperbolic cone over a metric space
together with its boundary metric.
"""

from ._scan import COMPILED, backend
from .spaces import (
    ExtendedMetricSpace,
    ValidationReport,
    generate,
    restrict_omega,
    scale,
    snowflake,
    space_from_matrix,
    space_from_points,
    validate,
)
from .moebius import (
    Certificate,
    CrossRatioTriple,
    admissible,
    crt,
    homothety_ratio,
    in_delta,
    involute,
    moebius_equivalent,
    ptolemy_defect,
)
from .hyperbolicity import (
    AptCertificate,
    apt_defect,
    gromov_delta,
    gromov_product,
    hyperbolicity_bound_from_apt,
    pt_kappa_defect,
    relative_gromov_product,
    sn_kappa,
)
from .comparison import (
    AscatCertificate,
    ascat_defect,
    comparison_quadrilateral,
    embed_triangle,
    model_distance,
)
from .cone import (
    ConePoint,
    ConeSpace,
    boundary_metric,
    build_cone,
    busemann_approx,
    classify_sequence,
    cone_distance,
    cone_gromov_product,
    recovered_involution,
)

__version__ = "0.1.0"
