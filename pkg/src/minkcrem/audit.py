"""Case-by-case upper bounds for l-subgroups of automorphism groups of minimal surfaces.

A finite l-subgroup of the Cremona group acts on a conic bundle or on a Del
Pezzo surface of degree 1..9.  Each case has its own bound on v_l(A) in terms
of (l, t, m); this module tabulates them and checks that none exceeds M(k, l).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .arith import FactoredNat, primes_up_to, valuation
from .bounds import GOOD_T, bound_exponent
from .fields import CyclotomicInvariants, ExtNat, is_admissible, require_admissible


class CaseId(enum.Enum):
    ConicBundle = "ConicBundle"
    DP9 = "DP9"
    DP8a = "DP8a"   # blow-up of P^2 at a point: reduces to DP9
    DP8b = "DP8b"   # smooth quadric
    DP7 = "DP7"     # reduces to degree 8
    DP6 = "DP6"
    DP5 = "DP5"
    DP4 = "DP4"
    DP3 = "DP3"
    DP2 = "DP2"
    DP1 = "DP1"


WEYL_ORDERS = {
    "S5": FactoredNat({2: 3, 3: 1, 5: 1}),
    "WeylD5": FactoredNat({2: 7, 3: 1, 5: 1}),
    "WeylE6": FactoredNat({2: 7, 3: 4, 5: 1}),
    "WeylE7": FactoredNat({2: 10, 3: 4, 5: 1, 7: 1}),
    "HexAut": FactoredNat({2: 2, 3: 1}),
    "JordanJ": FactoredNat({2: 10, 3: 4, 5: 2, 7: 1}),
}


def weyl_order(name: str) -> FactoredNat:
    """Order of one of the finite groups appearing in the case analysis.

    S5 (automorphisms of the Petersen graph), WeylD5, WeylE6, WeylE7,
    HexAut (automorphisms of the hexagon) and JordanJ (the Jordan constant).
    """
    try:
        return WEYL_ORDERS[name]
    except KeyError:
        raise ValueError(f"unknown group {name!r}; expected one of {sorted(WEYL_ORDERS)}") from None


def _conic_bundle(ell, t, m, sharp):
    if ell == 2:
        return 2 * m + 2
    if t in (1, 2):
        return 2 * m
    return 0


def _dp9(ell, t, m, sharp):
    if ell == 2:
        return 2 * m + 1
    if ell == 3:
        return 2 * m + 1 if t == 1 else m + 1
    if t == 1:
        return 2 * m
    if t in (2, 3):
        return m
    return 0


def _dp8b(ell, t, m, sharp):
    # Aut^o(S) is a form of PGL2 x PGL2, of index 2 in Aut(S)
    if ell == 2:
        return (2 * m + 2) + 1
    if t in (1, 2):
        return 2 * m
    if t in (3, 4, 6):
        if sharp and t == 6:
            return 0
        return m
    return 0


def _dp7(ell, t, m, sharp):
    return max(_dp9(ell, t, m, sharp), _dp8b(ell, t, m, sharp))


def _dp6(ell, t, m, sharp):
    if ell == 2:
        return 2 * m + 2
    if ell == 3:
        return 2 * m + 1
    if t in (1, 2):
        return 2 * m
    if t in (3, 4, 6):
        if sharp and t == 4:
            return 0
        return m
    return 0


def _dp5(ell, t, m, sharp):
    # A embeds in the automorphism group of the Petersen graph, S_5
    return valuation(ell, weyl_order("S5").value())


def _dp4(ell, t, m, sharp):
    if ell == 2:
        return valuation(2, weyl_order("WeylD5").value())
    return _dp5(ell, t, m, sharp)


def _dp3(ell, t, m, sharp):
    if ell == 3:
        # order 3^4 forces a primitive cube root of unity in k
        return 4 if t == 1 else 3
    return valuation(ell, weyl_order("WeylE6").value())


def _dp2(ell, t, m, sharp):
    # double cover of P^2: the degree 9 bounds, one extra factor 2 from the covering involution
    if ell == 2:
        return 2 * m + 2
    return _dp9(ell, t, m, sharp)


def _dp1(ell, t, m, sharp):
    # B <= k* x Aut(C) on the quadric cone; v(A) <= v(B) + 1 when l = 2
    if ell == 2:
        return (m + m + 1) + 1
    if t == 1:
        return m + m
    if t == 2:
        return 0 + m
    return 0


_CASES = {
    CaseId.ConicBundle: _conic_bundle,
    CaseId.DP9: _dp9,
    CaseId.DP8a: _dp9,
    CaseId.DP8b: _dp8b,
    CaseId.DP7: _dp7,
    CaseId.DP6: _dp6,
    CaseId.DP5: _dp5,
    CaseId.DP4: _dp4,
    CaseId.DP3: _dp3,
    CaseId.DP2: _dp2,
    CaseId.DP1: _dp1,
}


def case_bound(case: CaseId, inv: CyclotomicInvariants, sharp: bool = False) -> ExtNat:
    """Upper bound on v_l(A) for an l-group acting on a surface of the given case.

    ``sharp`` uses the refinements that kill the t = 6 bound for the quadric
    and the t = 4 bound in degree 6; the main theorem does not need them.
    """
    require_admissible(inv)
    return _CASES[CaseId(case)](inv.ell, inv.t, inv.m, sharp)


@dataclass(frozen=True)
class AuditReport:
    inv: CyclotomicInvariants
    M: ExtNat
    bounds: dict
    maximum: ExtNat
    argmax: frozenset

    @property
    def violations(self) -> list[CaseId]:
        return [c for c, b in self.bounds.items() if b > self.M]

    @property
    def passed(self) -> bool:
        return not self.violations

    @property
    def tight(self) -> bool:
        return self.maximum == self.M


def audit_all(inv: CyclotomicInvariants, sharp: bool = False) -> AuditReport:
    M = bound_exponent(inv)
    bounds = {c: case_bound(c, inv, sharp) for c in CaseId}
    top = max(bounds.values())
    argmax = frozenset(c for c, b in bounds.items() if b == top)
    return AuditReport(inv, M, bounds, top, argmax)


def audit_grid(max_ell: int = 100, max_t: int = 30, max_m: int = 8, sharp: bool = False):
    """Yield an AuditReport for every admissible (l, t, m) on the grid."""
    for ell in primes_up_to(max_ell):
        for t in range(1, max_t + 1):
            for m in range(2 if ell == 2 else 1, max_m + 1):
                inv = CyclotomicInvariants(ell, t, m)
                if is_admissible(inv):
                    yield audit_all(inv, sharp)


@dataclass(frozen=True)
class GridSummary:
    points: int
    violations: list
    not_tight: list

    @property
    def passed(self) -> bool:
        return not self.violations and not self.not_tight


def run_grid(max_ell: int = 100, max_t: int = 30, max_m: int = 8, sharp: bool = False) -> GridSummary:
    """Soundness (every case <= M) and tightness (max = M when t in {1,2,3,4,6})."""
    points, violations, not_tight = 0, [], []
    for rep in audit_grid(max_ell, max_t, max_m, sharp):
        points += 1
        if not rep.passed:
            violations.append(rep)
        if rep.inv.t in GOOD_T and not rep.tight:
            not_tight.append(rep)
    return GridSummary(points, violations, not_tight)
