"""Curvature operators of four-manifolds: decomposition, extremes and pinching checks."""

__version__ = "0.1.0"

from .curvature import (CurvatureOperator, compose, decompose, from_blocks, random_curvature,
                        reverse_orientation, ricci_contract, validate, weitzenbock_r2,
                        weyl_blocks, weyl_from_blocks)
from .einstein import (euler_upper_coefficient, kmin_from_kmax, lower_from_upper_check,
                       positive_intersection_contradiction, weyl_gap_check)
from .errors import CurvatureError, NonConvergenceWarning
from .extremes import (all_extremes, extremes_optimize, extremes_sample,
                       kperp_extremes_closed_form)
from .lambda2 import FrameRotation, Plane, form_to_plane, plane_to_form
from .models import (ModelSpace, catalog, cp2, gb_integrand, invariants, model_curvature,
                     product_s2s2, rescale, rp4, signature_integrand, sphere4, with_scalar)
from .normal_form import berger_normal_form, verify_normal_form
from .pinching import (SpectralContext, check_conditions, det_bound, discriminant_certificate,
                       lemma27_implication, lemma_bounds, lichnerowicz_lower, threshold)

__all__ = [
    "CurvatureOperator", "compose", "decompose", "from_blocks", "random_curvature",
    "reverse_orientation", "ricci_contract", "validate", "weitzenbock_r2", "weyl_blocks",
    "weyl_from_blocks", "euler_upper_coefficient", "kmin_from_kmax", "lower_from_upper_check",
    "positive_intersection_contradiction", "weyl_gap_check", "CurvatureError",
    "NonConvergenceWarning", "all_extremes", "extremes_optimize", "extremes_sample",
    "kperp_extremes_closed_form", "FrameRotation", "Plane", "form_to_plane", "plane_to_form",
    "ModelSpace", "catalog", "cp2", "gb_integrand", "invariants", "model_curvature",
    "product_s2s2", "rescale", "rp4", "signature_integrand", "sphere4", "with_scalar",
    "berger_normal_form", "verify_normal_form", "SpectralContext", "check_conditions",
    "det_bound", "discriminant_certificate", "lemma27_implication", "lemma_bounds",
    "lichnerowicz_lower", "threshold",
]
