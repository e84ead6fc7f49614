"""Move the flows to other coordinate charts.

The (w1, w2) chart uses u = L^-1 w1, v = L^-1 w2.  The DR chart uses
u = u1, v = T u2.  In the DR chart the potentials satisfy the dilaton
identity, and the second-flow potential has fixed low-order terms.
"""

from dkdv.hierarchy import dkdv_flow, dr_checks, nogo_check, to_chart

E = 4

F = dkdv_flow(0, E)
for chart in ("w", "dr"):
    G = to_chart(F, chart)
    for name, pot in zip(G.ring.names, G.potential):
        print(f"tau_0 in chart {chart}, potential {name}: {pot}")

print()
print(dr_checks(E))

print()
res = nogo_check(E)
print("DR-type pair with an extra alpha eps^2 u2_xx term:")
print("  commutator affine in alpha:", res.affine)
print("  commutes for some alpha:", not res.never_commute)
print("  reason:", res.witness)
