"""
Groups attaining the bound over finite fields
=============================================

Over F_q the bound is sharp: a torus of rank 2 together with a small group
of automorphisms of its character lattice produces an l-group of order
l^M(F_q, l).  The Fermat cubic surface supplies the one exceptional case
l = 3, t = m = 1.
"""

from minkcrem import analyze_structure, attainment_row, build_group, fermat_cubic_group, torus_point_order

# the torus for t = 3 over F_2 has Phi_3(2) = 7 points
print("|T(F_2)| for t=3:", torus_point_order(2, 3))

# l = 2 over F_5: (Z/4)^2 extended by the dihedral group of order 8
g = build_group(5, 2, 2)
rep = analyze_structure(g)
print(g.name, "order", rep.order, "exponent", rep.exponent,
      "min index of an abelian normal rank <= 2 subgroup", rep.min_index_abelian_normal_rank2)

# %%
# rows read: q l t m M constructed
for q, ell in [(2, 3), (2, 7), (4, 3), (5, 2), (7, 3), (11, 5), (3, 13)]:
    print(attainment_row(q, ell))

# %%
# the Fermat cubic group of order 3^4 has no abelian normal subgroup of
# rank <= 2 with index below 9
fermat = analyze_structure(fermat_cubic_group())
print("Fermat group: order", fermat.order, "exponent", fermat.exponent,
      "min index", fermat.min_index_abelian_normal_rank2)
