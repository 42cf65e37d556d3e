"""Gramians, Riesz and frame bounds, and oblique duals for lattice left
translates on the Heisenberg group."""

from .analysis import MarginResult, a_p_closed, a_p_direct, digamma, margin_min
from .bspline import bspline_profile, periodized_spectrum, riesz_bounds_classical
from .gramian import assemble_gramian, eig_bounds, frame_check, riesz_scan
from .heisenberg import GroupElement, SeparableGenerator, group_op
from .moment import oblique_dual, support_index_set, verify_biorthogonality
from .piecewise_poly import PiecewisePolynomial
from .profiles import FrequencyIndicator, TimeDomain

__all__ = [
    "MarginResult", "a_p_closed", "a_p_direct", "digamma", "margin_min",
    "bspline_profile", "periodized_spectrum", "riesz_bounds_classical",
    "assemble_gramian", "eig_bounds", "frame_check", "riesz_scan",
    "GroupElement", "SeparableGenerator", "group_op",
    "oblique_dual", "support_index_set", "verify_biorthogonality",
    "PiecewisePolynomial", "FrequencyIndicator", "TimeDomain",
]
