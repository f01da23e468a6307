"""Exact phase tropicalization over Hahn-series fields.

Scalars, polynomials and ideals over the valued field live in exact
arithmetic (Gaussian-rational coefficients, rational exponents, max
convention: val(t) = 1 and the bounded elements have val <= 0).  The SL2
side is numeric: polar geometry, the limit map and its inverse, and a
verification harness for the limit formula.
"""

__version__ = "0.1.0"

from .hahn import (GaussianRational, GradedMonomial, HahnPoly, HahnScalar,
                   NEG_INF, ONE, ZERO, evaluate_numeric, field_arithmetic,
                   gaussian, initial_form, residue, t_power, valuation)
from .phase import (PhasePoint, graded_scalar_action, phase_linear_action,
                    sup_norm, vector_initial_form)
from .polys import (ComplexPoly, TropicalPoly, ValuedPoly, dehomogenize,
                    diagonal_weight, graded_substitute, homogenize,
                    initial_poly, invert_matrix, leading_part,
                    linear_substitute, monomial_valuation, poly_arithmetic,
                    substitute, trim_to_tropical_support, tropical_poly,
                    tropical_roots)
from .ideals import (ComplexIdealRep, CriticalLevelReport, FiberReport,
                     ValuedIdeal, critical_levels, fiber_report, ideal_equal,
                     initial_ideal, is_homogeneous, weight_groebner)
from .lifting import lift_hypersurface_root, truncate_scalar, verify_point
from .layers import (LayerDecomposition, det_complex, det_free_reduce,
                     det_minus_one, det_valued, is_det_free,
                     layer_decomposition, monomialize_coefficients,
                     realize_from_layers)
from .sl2 import (HahnMat2, SL2TropPoint, adj2, canonical_ray, coamoeba,
                  det2, hermitian_projections, normalize_unimodular,
                  polar_decompose, polar_project, sl2_limit,
                  sl2_limit_inverse, stretch, stretch_unimodular,
                  valuative_tropicalization, verify_limit)
from .grammar import (Session, parse_complex_poly, parse_poly, parse_scalar,
                      parse_session)
from .errors import (InternalInvariantError, NonConvergenceError, ParseError,
                     RamifiedRootError)
