"""Hand-entered reference polynomials and cached expensive inputs shared by the tests."""

from functools import lru_cache

from stacksort.poly import MultiPoly
from stacksort.relations import derive_forbidden, discover_relations

# (coefficient, exponent of x1, exponent of x2) for the R16 denominator with x3 = x1
P16_TERMS = [
    (1, 0, 0), (-2, 1, 0), (-1, 0, 1),
    (1, 2, 0),
    (2, 2, 2),
    (2, 3, 3),
    (2, 4, 3),
    (5, 4, 4),
    (4, 5, 4),
    (14, 5, 5),
    (8, 6, 4),
    (13, 6, 5),
    (42, 6, 6),
    (22, 7, 5),
    (40, 7, 6),
    (41, 8, 5),
    (132, 7, 7),
    (77, 8, 6),
    (123, 8, 7),
    (134, 9, 6),
    (429, 8, 8),
    (252, 9, 7),
    (248, 10, 6),
]


def reference_p16() -> MultiPoly:
    return MultiPoly(2, [((a, b), c) for c, a, b in P16_TERMS])


@lru_cache(maxsize=None)
def r16_rules() -> tuple:
    return tuple(discover_relations(16, 2))


@lru_cache(maxsize=None)
def r16_forbidden() -> tuple:
    return tuple(derive_forbidden(r16_rules()))
