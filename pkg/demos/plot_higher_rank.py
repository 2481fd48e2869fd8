"""
Rank-r polynomials
==================

P_r(X) is the product of Phi_d(X)^[r/phi(d)] over all d.  For r = 2 it is
(X^4 - 1)(X^6 - 1), which is M(F_q) up to the factor 3.  Higher-rank values
are candidates only and are labelled as such.
"""

from minkcrem import conjectural_m3_finite, divisibility_probe, p_r

for r in range(1, 6):
    rp = p_r(r)
    print(f"P_{r} = {rp.product_form()}")
    print(f"    = {rp.poly}")

# %%
print("P_2(3) =", p_r(2).evaluate(3))
for q in (2, 3, 4):
    print(f"q={q}:", conjectural_m3_finite(q))

# %%
# does the bound divide c * P_r(q)?
for r, q, c in [(2, 7, 3), (2, 4, 1), (3, 2, 3)]:
    res = divisibility_probe(r, q, c)
    label = " (conjectural)" if res.conjectural else ""
    print(f"r={r} q={q} c={c}: {res.holds}{label}")
