"""Flows of the discrete KdV hierarchy from the Lax operator.

Prints the first few flow potentials, their dispersionless limits, and
checks that the flows commute.
"""

from dkdv.diffpoly import commutator_flows
from dkdv.hierarchy import dkdv_flow

E = 4

for d in range(3):
    F = dkdv_flow(d, E)
    pot = F.potential[1]
    print(f"tau_{d}: dv/dt = dx of")
    print(f"    {pot}")
    print(f"  at eps = 0, u = 0: {pot.at_eps0().set_zero('u')}")

print()
for d1 in range(3):
    for d2 in range(d1 + 1, 3):
        zero = all(not c for c in commutator_flows(dkdv_flow(d1, E), dkdv_flow(d2, E)))
        print(f"[tau_{d1}, tau_{d2}] = 0 to eps^{E}: {zero}")
