"""Max-plus Martin boundaries, representing measures and almost-geodesics."""

from .errors import *  # noqa: F401,F403
from .semiring import (
    DEFAULT_TOL,
    NEG_INF,
    Kernel,
    best_walk,
    kleene_plus,
    kleene_star,
    mat_mat,
    mat_vec,
)
from .kernels import (
    BoundaryFamily,
    MartinInstance,
    build_point_set,
    finite_martin_space,
    h_flat,
    martin_kernel,
    minimal_martin_space,
    tail_limit,
)
from .harmonic import Measure, is_harmonic, is_superharmonic, represents
from .measures import m_u, mu_max, mu_min, ordered_point_set, usc_hull
from .geodesics import (
    GeodesicCertificate,
    lemmaA_check,
    lemmaB_gap,
    min_parameter_kernel,
    min_parameter_u,
    rebase,
    witness_geodesic,
)
from .metric import (
    MetricInstance,
    graph_metric,
    greatest_nu,
    horofunction_limit,
    inf_representation_check,
    is_distance_like,
    rieffel_check,
    to_kernel,
)
from .corpus import example1, example2, metric_templates

__version__ = "0.1.0"
