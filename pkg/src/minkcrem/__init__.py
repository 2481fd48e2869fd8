"""Exact bounds on the orders of finite subgroups of the plane Cremona group.

For a field k the l-part of every finite subgroup order is at most
l^M(k, l), where M(k, l) depends only on two cyclotomic invariants t and m.
The package computes those invariants for described fields, the bounds,
explicit groups attaining them over finite fields, an audit of the
case-by-case bounds, and the rank-r polynomials P_r.
"""

from .arith import INFINITY, FactoredNat, IntPolynomial, cyclotomic_poly, factor, is_prime, mult_order, valuation
from .audit import CaseId, audit_all, case_bound, weyl_order
from .bounds import (
    NOT_SMALL,
    bound_exponent,
    bound_report,
    closed_form_finite,
    closed_form_padic,
    element_order_exists,
    global_bound,
    local_bound,
    padic_constant,
    range_bound,
)
from .constructions import attainment_row, attainment_sweep, build_group, fermat_cubic_group, torus_image_oracle, torus_point_order
from .errors import (
    CharacteristicExclusion,
    DomainError,
    FactorizationBudgetExceeded,
    InvariantViolation,
    LargeTMiss,
    MinkcremError,
    NotSmall,
    ResourceLimit,
    UnderdeterminedField,
)
from .fields import (
    CyclotomicInvariants,
    Explicit,
    Finite,
    FormalExtension,
    PAdic,
    Rationals,
    invariant_range,
    invariants,
    parse_field,
)
from .groups import analyze_structure
from .higher import conjectural_m3_finite, divisibility_probe, p_r

__version__ = "0.1.0"
