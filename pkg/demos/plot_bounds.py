"""
Cyclotomic invariants and the bound M(k)
========================================

Every finite subgroup of the plane Cremona group over k has an order whose
l-part is at most l^M(k, l).  M(k, l) depends only on two numbers t and m
describing the roots of unity of l-power order that k can see.
"""

from minkcrem import Finite, PAdic, Rationals, global_bound, invariants, parse_field
from minkcrem.bounds import bound_exponent_with_branch, closed_form_finite

# over Q, t = l - 1 and m = 1 for odd l, so only l <= 7 survive
for ell in (2, 3, 5, 7, 11, 13):
    inv = invariants(Rationals(), ell)
    M, branch = bound_exponent_with_branch(inv)
    print(f"l={ell:2d}  t={inv.t:2d}  m={inv.m}  M={M}  [{branch}]")

report = global_bound(Rationals())
print("M(Q) =", report.global_, "=", report.global_.value())

# %%
# Finite fields: the product over l agrees with 3^e (q^4 - 1)(q^6 - 1),
# the extra 3 appearing exactly when q = 4 or 7 mod 9
for q in (2, 3, 4, 5, 7, 8, 9, 16):
    direct = global_bound(Finite.of_order(q)).global_
    print(f"F_{q:<3d} {direct}  closed form agrees: {direct == closed_form_finite(q)}")

# %%
# p-adic fields borrow the invariants of Q at l = p and of F_p elsewhere
for p in (2, 3, 5, 7, 11, 13):
    print(f"Q_{p:<3d}", global_bound(PAdic(p)).global_)

# %%
# descriptor strings are what the command line accepts
print(global_bound(parse_field("ext(F_2,3)")).global_)
