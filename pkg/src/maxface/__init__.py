"""Maxfaces from singular Björling data.

Parse real-analytic curve data, solve the singular Björling problem,
classify the singularities along the singular curve and build sequences
of cuspidal-edge maxfaces converging to a given one.
"""

from .approximation import (ApproxFamily, FamilyKind, SupNormTable, build_L_based,
                            build_gamma_based, build_shrinking_example, convergence_report,
                            make_family, sup_norm_distance)
from .bjorling import (BjorlingData, MaxfaceSolution, Rect, ValidationReport,
                       WeierstrassData, check_g_nonunimodular, gauss_map_jet,
                       reconstruct_from_weierstrass, solve, solve_many, validate,
                       weierstrass_f)
from .errors import MaxfaceError
from .expr import AnalyticExpr, eval_complex, jet_at, parse_expr
from .jet import Jet, jet_div
from .presets import get_preset, list_presets
from .singularity import (SingularityReport, SingularityType, ToleranceSpec,
                          alpha_beta_eta, classify_by_abe, classify_by_data, pairing_D,
                          scan_interval)

__version__ = "0.1.0"

__all__ = [
    "AnalyticExpr", "ApproxFamily", "BjorlingData", "FamilyKind", "Jet", "MaxfaceError",
    "MaxfaceSolution", "Rect", "SingularityReport", "SingularityType", "SupNormTable",
    "ToleranceSpec", "ValidationReport", "WeierstrassData", "alpha_beta_eta",
    "build_L_based", "build_gamma_based", "build_shrinking_example", "check_g_nonunimodular",
    "classify_by_abe", "classify_by_data", "convergence_report", "eval_complex",
    "gauss_map_jet", "get_preset", "jet_at", "jet_div", "list_presets", "make_family",
    "pairing_D", "parse_expr", "reconstruct_from_weierstrass", "scan_interval", "solve",
    "solve_many", "sup_norm_distance", "validate", "weierstrass_f",
]
