"""Permutation-quotient and L2-distortion distances on n-point gauged and metric spaces."""

from .assignment import (
    ENUMERATION_CAP,
    linear_assignment_max,
    max_perm_correlation,
    perm_correlation,
    quotient_distance,
)
from .birkhoff import (
    Certificate,
    GapReport,
    bvn_decompose,
    distortion_distance,
    distortion_objective,
    frank_wolfe_max,
    h_objective,
)
from .core import (
    distance_matrix,
    gauge_matrix,
    l2_norm_sq,
    permute,
    power_transform,
    span_basis_one_perp,
    validate_metric,
)
from .spectral import conditional_spectrum, is_negative_type

__version__ = "0.1.0"
