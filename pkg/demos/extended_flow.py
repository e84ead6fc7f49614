"""Reconstruct the extended flows t1_d order by order in eps.

At each order the solver reports the number of unknowns, the rank of the
linear system and the kernel dimension.  A zero kernel everywhere means
the flow is uniquely determined.
"""

from dkdv.diffpoly import commutator_flows
from dkdv.hierarchy import dk11_display, dkdv_flow, extended_flow

E = 4

for d in (1, 2):
    F = extended_flow(d, E)
    rec = F.meta["reconstruction"]
    print(f"t1_{d}: unique = {rec.unique}")
    for p, unknowns, rank, kernel in rec.orders:
        print(f"  eps^{p}: unknowns {unknowns}, rank {rank}, kernel {kernel}")
    print(f"  potential: {F.potential[1]}")
    for dd in range(2):
        zero = all(not c for c in commutator_flows(F, dkdv_flow(dd, E)))
        print(f"  commutes with tau_{dd}: {zero}")

print()
print("solver output equals the closed form for t1_1:", extended_flow(1, E).potential[1] == dk11_display(E))
