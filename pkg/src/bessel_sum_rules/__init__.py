"""Closed-form sum rules for finite sums of squared spherical Bessel functions.

Three hierarchies of weighted sums sum_k c_k [j_k(z)]^2 admit closed forms
built from j_ell, j_{ell+1} and a small argument-doubling tail.  This
package evaluates them (directly, in closed form, and through the
generating recursions), produces all coefficients in exact rational
arithmetic, verifies the underlying identities mechanically, and times
closed forms against brute-force summation.
"""

from .benchmark import BenchReport, run_bench, spearman_rank_correlation
from .exact_coefficients import (
    BoundaryPolynomials,
    Hierarchy,
    alternating_composite_weight,
    boundary_polynomials,
    c_coefficient,
    composite_boundary,
    composite_step_brackets,
    f_weight,
    lhs_weight,
    pochhammer,
)
from .special_functions import (
    DEFAULT_MAX_ORDER,
    MAX_ARGUMENT,
    BesselSequence,
    order_ceiling,
    spherical_j_sequence,
)
from .sum_rules import (
    ELL_CEILING,
    REL_ERROR_FLOOR,
    Z_CEILING,
    BaseRule,
    SumRuleEvaluation,
    SumRuleQuery,
    base_rule,
    closed_form,
    direct_sum,
    evaluate,
    recursive_form,
)
from .verification import (
    CoefficientFamily,
    Identity,
    RelationResidual,
    c_recurrence_residual,
    coefficient_family_consistency,
    four_term_residual,
    master_relation_defect,
    master_relation_residual,
    orthogonality_residual,
    product_identity_residual,
    run_suite,
    seven_families,
    terminating_3f2_residual,
)

__version__ = "0.1.0"

__all__ = [
    "BaseRule",
    "BenchReport",
    "BesselSequence",
    "BoundaryPolynomials",
    "CoefficientFamily",
    "DEFAULT_MAX_ORDER",
    "ELL_CEILING",
    "Hierarchy",
    "Identity",
    "MAX_ARGUMENT",
    "REL_ERROR_FLOOR",
    "RelationResidual",
    "Z_CEILING",
    "SumRuleEvaluation",
    "SumRuleQuery",
    "__version__",
    "alternating_composite_weight",
    "base_rule",
    "boundary_polynomials",
    "c_coefficient",
    "c_recurrence_residual",
    "closed_form",
    "coefficient_family_consistency",
    "composite_boundary",
    "composite_step_brackets",
    "direct_sum",
    "evaluate",
    "f_weight",
    "four_term_residual",
    "lhs_weight",
    "master_relation_defect",
    "master_relation_residual",
    "order_ceiling",
    "orthogonality_residual",
    "pochhammer",
    "product_identity_residual",
    "recursive_form",
    "run_bench",
    "run_suite",
    "seven_families",
    "spearman_rank_correlation",
    "spherical_j_sequence",
    "terminating_3f2_residual",
]
