import math

import pytest

from minkcrem.arith import FactoredNat, factor
from minkcrem.audit import CaseId, audit_all, audit_grid, case_bound, run_grid, weyl_order
from minkcrem.bounds import bound_exponent
from minkcrem.errors import InadmissibleInvariants
from minkcrem.fields import CyclotomicInvariants


def inv(ell, t, m):
    return CyclotomicInvariants(ell, t, m)


@pytest.mark.parametrize("case, i, expected", [
    (CaseId.ConicBundle, inv(2, 1, 2), 6),
    (CaseId.DP5, inv(5, 4, 1), 1),
    (CaseId.DP5, inv(5, 1, 7), 1),
    (CaseId.DP3, inv(3, 2, 1), 3),
    (CaseId.DP3, inv(3, 1, 1), 4),
    (CaseId.DP4, inv(2, 2, 2), 7),
])
def test_case_bound_examples(case, i, expected):
    assert case_bound(case, i) == expected


def test_dp3_uses_e6_order():
    assert case_bound(CaseId.DP3, inv(2, 1, 5)) == 7
    assert case_bound(CaseId.DP3, inv(5, 1, 3)) == 1
    for ell in (7, 11, 13):
        assert case_bound(CaseId.DP3, inv(ell, 1, 2)) == 0


def test_reductions_are_literal():
    for i in (inv(2, 1, 3), inv(3, 2, 1), inv(7, 3, 2), inv(13, 4, 1)):
        assert case_bound(CaseId.DP8a, i) == case_bound(CaseId.DP9, i)
        assert case_bound(CaseId.DP7, i) == max(case_bound(CaseId.DP9, i), case_bound(CaseId.DP8b, i))


def test_sharp_variants():
    assert case_bound(CaseId.DP8b, inv(7, 6, 1)) == 1
    assert case_bound(CaseId.DP8b, inv(7, 6, 1), sharp=True) == 0
    assert case_bound(CaseId.DP6, inv(5, 4, 1)) == 1
    assert case_bound(CaseId.DP6, inv(5, 4, 1), sharp=True) == 0


def test_audit_all_two_adic():
    rep = audit_all(inv(2, 1, 2))
    assert rep.passed and rep.tight and rep.maximum == 7
    assert rep.argmax == {CaseId.DP3, CaseId.DP4, CaseId.DP7, CaseId.DP8b}


def test_audit_all_seven():
    rep = audit_all(inv(7, 6, 1))
    assert rep.passed and rep.maximum == 1
    assert rep.argmax == {CaseId.DP6, CaseId.DP7, CaseId.DP8b}


def test_audit_all_large_t_is_zero():
    rep = audit_all(inv(11, 5, 1))
    assert set(rep.bounds.values()) == {0}


def test_audit_rejects_inadmissible():
    with pytest.raises(InadmissibleInvariants):
        audit_all(inv(5, 3, 1))


@pytest.mark.parametrize("name, degrees", [
    ("WeylD5", (2, 4, 5, 6, 8)),
    ("WeylE6", (2, 5, 6, 8, 9, 12)),
    ("WeylE7", (2, 6, 8, 10, 12, 14, 18)),
])
def test_weyl_orders_from_invariant_degrees(name, degrees):
    assert weyl_order(name) == factor(math.prod(degrees))


def test_other_orders():
    assert weyl_order("S5").value() == math.factorial(5)
    assert weyl_order("HexAut").value() == 12
    assert weyl_order("JordanJ") == FactoredNat({2: 10, 3: 4, 5: 2, 7: 1})
    with pytest.raises(ValueError):
        weyl_order("E8")


@pytest.mark.parametrize("sharp", [False, True])
def test_soundness_and_tightness_grid(sharp):
    summary = run_grid(100, 30, 8, sharp=sharp)
    assert summary.points == 1110
    assert not summary.violations
    assert not summary.not_tight


def test_grid_reports_match_bound_exponent():
    for rep in audit_grid(30, 12, 4):
        assert rep.M == bound_exponent(rep.inv)
        assert rep.maximum <= rep.M
