"""Exact square-to-linear ratio bounds and certificates for plane curves."""

from .curves import (
    AffineMap, ParamSample, Point, PolylineCurve, SelfSimilarCurveSpec, VisitMoments,
    catalog, eval_curve, first_last_moments, load_spec, point, vertices,
)
from .slr import SlrValue, WitnessPair, pairwise_slr_lower, slr_bounds, slr_upper_bound
from .certificates import Chain, ChainCertificate, best_chain, certificate_value, max_link_ratio
from .cases import builtin_cases, expand_chain, minimize_form, verify_all_cases
from .geometry import antipode_pair_find, circle_containment_check, opposite_sides_check
from .lattice import GridOrdering, discrete_ratio, optimal_ordering

__version__ = "0.1.0"
