"""The bound M(k, l), smallness, and the global bound M(k) = prod l^M(k, l)."""

from __future__ import annotations

from dataclasses import dataclass

from .arith import INFINITY, FactoredNat, cyclotomic_poly, euler_phi, factor, is_prime
from .errors import LargeTMiss, NotSmall, UnderdeterminedField
from .fields import (
    CyclotomicInvariants,
    ExtNat,
    Explicit,
    FieldDescriptor,
    Finite,
    FormalExtension,
    PAdic,
    Rationals,
    invariant_range,
    invariants,
    normalize,
    require_admissible,
)

NOT_SMALL = "not-small"

# t values for which the torus constructions produce nontrivial l-groups
GOOD_T = frozenset({1, 2, 3, 4, 6})


def bound_exponent_with_branch(inv: CyclotomicInvariants) -> tuple[ExtNat, str]:
    require_admissible(inv)
    ell, t, m = inv.ell, inv.t, inv.m
    if ell == 2:
        return 2 * m + 3, "l=2:2m+3"
    if ell == 3:
        if t == 1 and m == 1:
            return 4, "l=3,t=m=1:4"
        return 2 * m + 1, "l=3:2m+1"
    if t in (1, 2):
        return 2 * m, "l>3,t=1|2:2m"
    if t in (3, 4, 6):
        return m, "l>3,t=3|4|6:m"
    return 0, "l>3,t=5|t>6:0"


def bound_exponent(inv: CyclotomicInvariants) -> ExtNat:
    """M(k, l) from the invariants; ``INFINITY`` when m is infinite and t allows it."""
    return bound_exponent_with_branch(inv)[0]


def element_order_exists(inv: CyclotomicInvariants) -> bool:
    """Whether the Cremona group contains an element of order l (phi(t) <= 2)."""
    require_admissible(inv)
    return euler_phi(inv.t) <= 2


def is_small(field: FieldDescriptor) -> tuple[bool, str]:
    field = normalize(field)
    if isinstance(field, (Rationals, Finite, PAdic)):
        return True, "finitely generated over the prime field"
    if isinstance(field, FormalExtension):
        ok, why = is_small(field.base)
        return ok, f"finite extension of {field.base}: {why}"
    if isinstance(field, Explicit):
        infinite = [ell for ell, _, m in field.table if m is INFINITY]
        if infinite:
            return False, f"m is infinite at l={infinite[0]}"
        if not field.large_t:
            return False, "untabulated primes are not certified to have t > 6"
        return True, "all tabulated m finite and t > 6 elsewhere"
    raise TypeError(f"unknown field descriptor {field!r}")


def _cyclotomic_factors(q: int) -> list[FactoredNat]:
    # (q^4 - 1)(q^6 - 1) = Phi_1^2 Phi_2^2 Phi_3 Phi_4 Phi_6 evaluated at q
    return [factor(cyclotomic_poly(d)(q)) for d in (1, 1, 2, 2, 3, 4, 6)]


def _support_q4q6(q: int) -> set[int]:
    primes: set[int] = set()
    for f in _cyclotomic_factors(q):
        primes.update(f.primes)
    return primes


def relevant_primes(field: FieldDescriptor) -> list[int]:
    """The primes l != char(k) with M(k, l) > 0, ascending."""
    field = normalize(field)
    if isinstance(field, Rationals):
        return [2, 3, 5, 7]
    if isinstance(field, Finite):
        return sorted(_support_q4q6(field.q) - {field.p})
    if isinstance(field, PAdic):
        p = field.p
        extra = {p} if p in (2, 3, 5, 7) else set()
        return sorted((_support_q4q6(p) - {p}) | extra)
    if isinstance(field, Explicit):
        small, why = is_small(field)
        if not small:
            raise NotSmall(f"{field}: {why}")
        return [ell for ell, t, m in field.table
                if bound_exponent(CyclotomicInvariants(ell, t, m)) > 0]
    if isinstance(field, FormalExtension):
        raise UnderdeterminedField(f"{field} does not determine its invariants")
    raise TypeError(f"unknown field descriptor {field!r}")


@dataclass(frozen=True)
class PrimeBound:
    ell: int
    inv: CyclotomicInvariants
    M: ExtNat
    branch: str


@dataclass(frozen=True)
class BoundReport:
    field: FieldDescriptor
    per_prime: tuple[PrimeBound, ...]
    global_: FactoredNat | str  # FactoredNat, or NOT_SMALL

    @property
    def is_small(self):
        return self.global_ != NOT_SMALL


def local_bound(field: FieldDescriptor, ell: int) -> PrimeBound | None:
    """M(k, l) with its branch; None when l lies outside an explicit table flagged large_t."""
    try:
        inv = invariants(field, ell)
    except LargeTMiss:
        return None
    M, branch = bound_exponent_with_branch(inv)
    return PrimeBound(ell, inv, M, branch)


def range_bound(field: FieldDescriptor, ell: int) -> ExtNat:
    """Largest M(k', l) compatible with what the descriptor says about k' at l."""
    rng = invariant_range(field, ell)
    best = 0
    for t in rng.t_candidates:
        best = max(best, bound_exponent(CyclotomicInvariants(ell, t, rng.m_upper)))
    return best


def global_bound(field: FieldDescriptor) -> BoundReport:
    """M(k) as a factored integer, with the per-prime breakdown.

    Raises NotSmall when M(k) is not a finite product.
    """
    per = []
    total = FactoredNat.one()
    for ell in relevant_primes(field):
        pb = local_bound(field, ell)
        if pb.M is INFINITY:
            raise NotSmall(f"M({field}, {ell}) is infinite")
        per.append(pb)
        if pb.M:
            total = total * FactoredNat({ell: pb.M})
    return BoundReport(field, tuple(per), total)


def bound_report(field: FieldDescriptor) -> BoundReport:
    """Like :func:`global_bound`, but a field that is not small yields a report
    marked NOT_SMALL listing whatever per-prime values the descriptor fixes."""
    try:
        return global_bound(field)
    except NotSmall:
        field = normalize(field)
        if not isinstance(field, Explicit):
            raise
        per = tuple(local_bound(field, ell) for ell, _, _ in field.table)
        return BoundReport(field, per, NOT_SMALL)


def _check_prime_power(q: int) -> None:
    Finite.of_order(q)


def closed_form_finite(q: int) -> FactoredNat:
    """Factored value of 3(q^4-1)(q^6-1) if q = 4, 7 mod 9, else (q^4-1)(q^6-1)."""
    _check_prime_power(q)
    total = FactoredNat.one()
    for f in _cyclotomic_factors(q):
        total = total * f
    if q % 9 in (4, 7):
        total = total * FactoredNat({3: 1})
    return total


_PADIC_C = {2: {2: 7}, 3: {3: 3}, 5: {5: 1}, 7: {3: 1, 7: 1}}


def padic_constant(p: int) -> FactoredNat:
    """The correction c(p) in M(Q_p) = c(p)(p^4-1)(p^6-1)."""
    if p in _PADIC_C:
        return FactoredNat(_PADIC_C[p])
    if p % 9 in (4, 7):
        return FactoredNat({3: 1})
    return FactoredNat.one()


def closed_form_padic(p: int) -> FactoredNat:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    total = padic_constant(p)
    for f in _cyclotomic_factors(p):
        total = total * f
    return total
