"""Verification and counterexample toolkit for modulus-semiconvex functions.

Checks the defining midpoint/envelope/derivative-gap inequalities on sampled
convex bodies, computes recession-cone classifications with the quantitative
derivative bounds they unlock, and constructs counterexample witnesses (with
an escalation refutation) on the degenerate unbounded bodies where no such
bound exists.
"""

from .boundary import ConstBoundary, MaxAffine, MinAffine, PowerBoundary
from .errors import (ConstructionError, DomainError, ExprError, NumericError, PreconditionError,
                     SceneError, SemiconvexityError)
from .fields import (CatalogField, ExprField, FiniteDifferenceField, LinearPrecomposeField,
                     LineRestriction, catalog_field, eval_gradient, parse_expression,
                     restrict_to_line)
from .geometry import (AffineBody, BallBody, Classification, Cone, ConvexBody, HRepBody,
                       LinearMapSpec, ProductBody, SpaceBody, StripBody, ULBody, WedgeBody,
                       check_image_recession, classify_body, cone_dimension, eccentricity,
                       eccentricity_report, find_transversal, linear_image, recession_cone,
                       recession_oracle_report)
from .kernels import BACKEND
from .modulus import (Eta, IntegralModulus, LinearModulus, Modulus, PiecewiseLinearEta, PowerEta,
                      PowerModulus, ScaledModulus, SqrtLogModulus, TabulatedModulus, ULEta,
                      ZeroModulus, asymptotics_probe, build_integral_modulus, check_modulus_axioms,
                      eval_modulus, scale_modulus)
from .regularity import (check_inscribed_ball_bound, check_directional_gap, check_envelope,
                         check_semiconcave, check_semiconvex, check_semiconvex_on_lines,
                         check_derivative_bounds, estimate_derivative_modulus)
from .reporting import MarginReport, RefutationReport
from .sampling import SamplerSpec
from .scene import Scene, body_from_spec, load_scene, scene_from_dict
from .witness import (Witness, apply_affine, build_strip_witness, build_ul_witness,
                      build_wedge_witness, construct_witness, lift_witness, refute_c1omega,
                      witness_from_dict)

__version__ = "0.1.0"
