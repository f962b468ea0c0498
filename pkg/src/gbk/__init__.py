"""Numerical geometry of oriented Grassmannians, graph submanifolds and cones."""

from .errors import (
    CapacityError,
    DegenerateInputError,
    DomainError,
    GBKError,
    InvalidInputError,
    NumericError,
    NumericWarning,
    PreconditionError,
)
from .multivector import Multivector, hodge_star, inner, wedge
from .grassmann import (
    GrassmannPoint,
    JordanData,
    SOrthogonalPair,
    chart_metric,
    chart_metric_eigen,
    distance,
    geodesic_Pt,
    is_s_orthogonal,
    jordan_angles,
    matrix_chart,
    normal_complement,
    polar,
    s_map,
    w_function,
    w_matrix,
)
from .region import (
    HFamily,
    PhiFunction,
    RegionSpec,
    F_value,
    H_tilde,
    H_value,
    build_phi,
    check_level,
    in_region,
    psi_value,
    target_diffeo,
    transition_constants,
)
from .graph import (
    GraphMap,
    PointGeometry,
    check_bernstein_hypotheses,
    dvp_constants,
    gauss_map,
    geometry_at,
    get_example,
    laplace_beltrami,
    verify_delta_w,
    verify_dw,
    verify_rank_inequality,
    verify_subhar3,
)
from .cones import (
    SphereImmersion,
    check_rigidity_hypothesis,
    coassociative_profile,
    cone_geometry,
    hopf_map,
    lo_cone_frames,
    lo_graph,
    normal_gauss_map,
)

__version__ = "0.1.0"
