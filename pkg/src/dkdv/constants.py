"""Fixed rational constants used as fixtures by the checks.

They come from intersection-number computations that are out of reach here,
so they are recorded rather than derived.
"""

from types import MappingProxyType

from gmpy2 import mpq

_TABLE = {
    # g = 1 coefficient of the I_2 series
    "I21": mpq(1, 12),
    # g = 1 coefficient of L = (z/2)/sin(z/2)
    "L1": mpq(1, 24),
    # g = 1 coefficient of T in the DR chart
    "T1": mpq(1, 24),
    # eps^2 part of the u1-free P^2_{2,0}: c * (2 u2 u2_2 + u2_1^2)
    "P2_20_eps2": mpq(-1, 48),
}

CONSTANTS = MappingProxyType(_TABLE)


def lookup(name: str):
    try:
        return CONSTANTS[name]
    except KeyError:
        raise KeyError(f"no constant named {name!r}; known: {sorted(CONSTANTS)}") from None
