"""Operator fixtures and the generating-series relations."""

from dkdv.evenop import make_named
from dkdv.genfun import named_series, series_relations_check

for name in ("L", "R", "X", "T"):
    op = make_named(name, 3)
    print(f"{name}: {', '.join(str(c) for c in op.coeffs)}")

print()
for name in ("I1", "I2"):
    print(f"{name}: {', '.join(str(c) for c in named_series(name, 4).even_coeffs())}")

print()
print(series_relations_check(5))
