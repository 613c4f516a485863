"""Inscribed cyclic quadrilaterals in closed curves on constant-curvature surfaces."""

__version__ = "0.1.0"

from .curve import SampledCurve
from .curvespec import CurveSpec, load_bundled, load_curve, parse_curve
from .engine import (Inscription, find_inscriptions, grid_scan, rectangle_search_sphere, refine,
                     residual, validate_inscription)
from .errors import (AntipodalError, ConvergenceError, DiagonalError, DiameterWarning,
                     GeometryError, HypothesisError, SchemaError)
from .flow import PairState, flow_closed_form, flow_ode, hamiltonian
from .geometry import Surface, d_exp, distance, exp_map, log_map
from .oracle import brute_force_oracle
from .pullback import compute_a, compute_constants, verify_pullback_geometric
from .quad import AngleTriple, CirclePair, f_phi, f_phi_inverse, quad_map
from .records import ResultRecord
from .render import render_svg

__all__ = [
    "AngleTriple", "AntipodalError", "CirclePair", "ConvergenceError", "CurveSpec",
    "DiagonalError", "DiameterWarning", "GeometryError", "HypothesisError", "Inscription",
    "PairState", "ResultRecord", "SampledCurve", "SchemaError", "Surface",
    "brute_force_oracle", "compute_a", "compute_constants", "d_exp", "distance", "exp_map",
    "f_phi", "f_phi_inverse", "find_inscriptions", "flow_closed_form", "flow_ode", "grid_scan",
    "hamiltonian", "load_bundled", "load_curve", "log_map", "parse_curve", "quad_map",
    "rectangle_search_sphere", "refine", "render_svg", "residual", "validate_inscription",
    "verify_pullback_geometric",
]
