"""Genus-zero data: the flat F-manifold and its principal densities."""

from dkdv.genfun import (
    density_closed_form,
    oriented_associativity_check,
    potential_extended_2spin,
    principal_density,
)

P = potential_extended_2spin()
print("vector potential:")
for k, F in enumerate(P.F, start=1):
    print(f"  F^{k} = {F}")

print()
print(oriented_associativity_check(P))

print()
for d in range(4):
    got = principal_density(P, 1, 1, d).poly
    print(f"psi^1_(1,{d}) = {got}   closed form agrees: {got == density_closed_form(1, 1, d)}")
for d in range(3):
    print(f"psi^2_(2,{d}) = {principal_density(P, 2, 2, d).poly}")
