"""Mestre conic and cubic coefficients as polynomials in Clebsch invariants.

Generated by tools/gen_mestre_tables.py; do not edit by hand.
Keys of the inner dicts are exponents (a, b, c, e) of A^a B^b C^c D^e.
"""

from fractions import Fraction as Fr

CONIC = {
    (0, 0): {(0, 0, 1, 0): Fr(2, 1), (1, 1, 0, 0): Fr(1, 3)},
    (0, 1): {(0, 2, 0, 0): Fr(2, 3), (1, 0, 1, 0): Fr(2, 3)},
    (0, 2): {(0, 0, 0, 1): Fr(1, 1)},
    (1, 1): {(0, 0, 0, 1): Fr(1, 1)},
    (1, 2): {(0, 0, 2, 0): Fr(2, 3), (0, 3, 0, 0): Fr(1, 3), (1, 1, 1, 0): Fr(4, 9)},
    (2, 2): {(0, 1, 0, 1): Fr(1, 2), (0, 2, 1, 0): Fr(2, 9), (1, 0, 2, 0): Fr(2, 9)},
}

CUBIC = {
    (0, 0, 0): {(0, 0, 0, 1): Fr(2, 1), (0, 1, 1, 0): Fr(-4, 3), (2, 0, 1, 0): Fr(2, 9)},
    (0, 0, 1): {(0, 0, 2, 0): Fr(4, 3), (0, 3, 0, 0): Fr(2, 9), (1, 0, 0, 1): Fr(1, 3), (1, 1, 1, 0): Fr(4, 9)},
    (0, 0, 2): {(0, 1, 0, 1): Fr(1, 3), (0, 2, 1, 0): Fr(4, 9), (1, 0, 2, 0): Fr(2, 3), (1, 3, 0, 0): Fr(1, 9), (2, 1, 1, 0): Fr(4, 27)},
    (0, 1, 1): {(0, 1, 0, 1): Fr(1, 3), (0, 2, 1, 0): Fr(4, 9), (1, 0, 2, 0): Fr(2, 3), (1, 3, 0, 0): Fr(1, 9), (2, 1, 1, 0): Fr(4, 27)},
    (0, 1, 2): {(0, 0, 1, 1): Fr(2, 3), (0, 1, 2, 0): Fr(2, 9), (0, 4, 0, 0): Fr(1, 9), (1, 1, 0, 1): Fr(1, 6), (1, 2, 1, 0): Fr(2, 9), (2, 0, 2, 0): Fr(2, 27)},
    (0, 2, 2): {(0, 0, 3, 0): Fr(4, 9), (0, 2, 0, 1): Fr(1, 6), (0, 3, 1, 0): Fr(8, 27), (1, 0, 1, 1): Fr(1, 9), (1, 1, 2, 0): Fr(13, 27), (1, 4, 0, 0): Fr(1, 18), (2, 2, 1, 0): Fr(2, 27)},
    (1, 1, 1): {(0, 0, 1, 1): Fr(-1, 3), (0, 1, 2, 0): Fr(2, 9), (0, 4, 0, 0): Fr(1, 3), (1, 2, 1, 0): Fr(2, 3), (2, 0, 2, 0): Fr(8, 27)},
    (1, 1, 2): {(0, 0, 3, 0): Fr(-2, 9), (0, 2, 0, 1): Fr(1, 2), (0, 3, 1, 0): Fr(-1, 27), (1, 0, 1, 1): Fr(4, 9), (1, 1, 2, 0): Fr(-2, 27)},
    (1, 2, 2): {(0, 0, 0, 2): Fr(1, 2), (0, 1, 1, 1): Fr(-1, 18), (0, 2, 2, 0): Fr(1, 27), (0, 5, 0, 0): Fr(1, 18), (1, 3, 1, 0): Fr(1, 9), (2, 1, 2, 0): Fr(4, 81)},
    (2, 2, 2): {(0, 0, 2, 1): Fr(5, 9), (0, 1, 3, 0): Fr(-1, 27), (0, 3, 0, 1): Fr(1, 4), (0, 4, 1, 0): Fr(-1, 18), (1, 1, 1, 1): Fr(1, 3), (1, 2, 2, 0): Fr(-1, 9), (2, 0, 3, 0): Fr(-4, 81)},
}
