"""
Auditing the case-by-case bounds
================================

An l-subgroup of the Cremona group acts on a conic bundle or on a Del Pezzo
surface of degree 1 to 9.  Each case bounds v_l(A) on its own; none may
exceed M(k, l), and whenever t is 1, 2, 3, 4 or 6 one of them must reach it.
"""

from minkcrem import CaseId, CyclotomicInvariants, audit_all
from minkcrem.audit import run_grid

rep = audit_all(CyclotomicInvariants(2, 1, 2))
for case in CaseId:
    print(f"{case.value:<12}{rep.bounds[case]}")
print("M =", rep.M, "reached by", sorted(c.value for c in rep.argmax))

# %%
# the refinements for t = 6 on the quadric and t = 4 in degree 6 only lower bounds
for sharp in (False, True):
    r = audit_all(CyclotomicInvariants(7, 6, 1), sharp=sharp)
    print("sharp" if sharp else "plain", sorted(c.value for c in r.argmax))

# %%
summary = run_grid(100, 30, 8)
print(summary.points, "grid points,", len(summary.violations), "violations,",
      len(summary.not_tight), "not tight")
